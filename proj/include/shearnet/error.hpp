#pragma once

#include <stdexcept>
#include <string>

namespace shearnet {

// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

// A vector of zero norm where a unit atom was expected.
class DegenerateAtom : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class EmptyDictionary : public Error {
public:
    using Error::Error;
};

// A request whose size exceeds a hard cap (full CDSH, brute-force nets).
class CapExceeded : public Error {
public:
    using Error::Error;
};

// statistic_fft on a dictionary that was not built from translation slices.
class NotTranslationStructured : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace shearnet
