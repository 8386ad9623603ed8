#pragma once

#include <filesystem>
#include <iosfwd>

#include "shearnet/signal.hpp"

namespace shearnet {

// Binary layout, little-endian:
//   bytes 0-3   magic "SIG1"
//   bytes 4-7   uint32 dims (1 or 2)
//   bytes 8-15  uint64 n
//   then n (1D) or n*n (2D) float64 values in storage order.
void write_signal_binary(std::ostream& out, const Signal& x);
Signal read_signal_binary(std::istream& in);

// CSV: one value per line (1D) or n rows of n comma-separated values (2D).
void write_signal_csv(std::ostream& out, const Signal& x);
Signal read_signal_csv(std::istream& in);

// Format chosen by extension: ".csv" is CSV, anything else is binary.
void save_signal(const std::filesystem::path& path, const Signal& x);
Signal load_signal(const std::filesystem::path& path);

}  // namespace shearnet
