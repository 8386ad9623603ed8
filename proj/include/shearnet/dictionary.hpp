#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "shearnet/signal.hpp"

namespace shearnet {

struct SparseEntry {
    std::uint32_t index = 0;
    double value = 0.0;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

using SparseVector = std::vector<SparseEntry>;

// psi_{a,t}: integer scale 1 <= a <= n/2, shift 1 <= t <= n.
struct HaarParams {
    int scale = 1;
    int shift = 1;

    auto operator<=>(const HaarParams&) const = default;
};

// psi_{a,s,t}: scale 1..n, shear -n/2..n/2, translation in [1, n]^2.
struct ShearletParams {
    int scale = 1;
    int shear = 0;
    int t1 = 1;
    int t2 = 1;

    auto operator<=>(const ShearletParams&) const = default;
};

// Position in a dictionary assembled from explicit atoms.
struct IndexParams {
    std::size_t id = 0;

    auto operator<=>(const IndexParams&) const = default;
};

using AtomParams = std::variant<HaarParams, ShearletParams, IndexParams>;

std::string to_string(const AtomParams& p);
nlohmann::json params_json(const AtomParams& p);

// One unit-norm dictionary element. support is sorted by index, indices are
// unique and in-grid. raw_norm is the l2 norm before normalization.
struct Atom {
    AtomParams params;
    SparseVector support;
    double raw_norm = 1.0;
};

// Circular translation by (d1, d2) grid steps; d2 unused in 1D.
struct Shift {
    int d1 = 0;
    int d2 = 0;

    friend bool operator==(const Shift&, const Shift&) = default;
};

struct Member {
    Shift shift;
    AtomParams params;
};

// Atoms that are circular translates of one origin atom.
struct Slice {
    Atom origin;
    std::vector<Member> members;
};

// Sampling parameters that generated a dictionary.
struct Provenance {
    std::string family;   // "haar", "shearlet", "custom"
    std::string variant;  // "full", "subsampled", "explicit"
    nlohmann::json parameters = nlohmann::json::object();
};

class Dictionary {
public:
    // Translation-structured dictionary: every atom is a member of a slice.
    Dictionary(Grid grid, Provenance provenance, std::vector<Slice> slices);

    // Dictionary over explicit atoms, one per slice; not translation-structured.
    static Dictionary from_atoms(Grid grid, Provenance provenance, std::vector<Atom> atoms);

    const Grid& grid() const { return grid_; }
    const Provenance& provenance() const { return provenance_; }
    std::span<const Slice> slices() const { return slices_; }
    bool translation_structured() const { return structured_; }

    std::size_t size() const { return offsets_.back(); }
    std::size_t slice_offset(std::size_t slice) const { return offsets_[slice]; }

    struct Location {
        std::size_t slice = 0;
        std::size_t member = 0;
    };
    Location locate(std::size_t j) const;

    const AtomParams& params(std::size_t j) const;
    Atom atom(std::size_t j) const;

    // Manifest: provenance plus counts; atom values are regenerated on load.
    nlohmann::json manifest() const;

private:
    Dictionary(Grid grid, Provenance provenance, std::vector<Slice> slices, bool structured);

    Grid grid_;
    Provenance provenance_;
    std::vector<Slice> slices_;
    std::vector<std::size_t> offsets_;
    bool structured_ = true;
};

// Storage index of `index` after circular translation by `shift`.
inline std::uint32_t translate_index(std::uint32_t index, Shift shift, const Grid& grid) {
    const auto n = static_cast<std::uint32_t>(grid.n);
    if (grid.dims == 1) return (index + static_cast<std::uint32_t>(shift.d1)) % n;
    const std::uint32_t r = (index / n + static_cast<std::uint32_t>(shift.d1)) % n;
    const std::uint32_t c = (index % n + static_cast<std::uint32_t>(shift.d2)) % n;
    return r * n + c;
}

Atom translate(const Atom& origin, const Member& member, const Grid& grid);

// Throws DegenerateAtom on a zero vector.
SparseVector unit_normalize(SparseVector values);

void validate_atom(const Atom& atom, const Grid& grid);

double inner(const Atom& atom, const Signal& x);

// <translate(origin, shift), x> without materializing the translate.
double inner_translated(const SparseVector& origin, Shift shift, const Signal& x);

double inner(const Atom& g, const Atom& h);

// sqrt(max(0, 1 - <g, h>)).
double delta_metric(const Atom& g, const Atom& h);

struct NearestResult {
    Atom atom;
    double distance = 0.0;
    std::size_t index = 0;
};

// argmin over sub of delta_metric, first occurrence on ties.
NearestResult nearest_atom(const Dictionary& sub, const Atom& g);

struct NetResult {
    double value = 0.0;
    std::size_t witness = 0;  // index into the full dictionary
    AtomParams witness_params;
};

// Upper bound on |full| * |sub| accepted by the brute-force net check.
inline constexpr double kBruteForcePairCap = 2.0e10;

// Exact max over full atoms of min over sub atoms of delta_metric.
NetResult epsnet_maxmin(const Dictionary& full, const Dictionary& sub,
                        double pair_cap = kBruteForcePairCap);

}  // namespace shearnet
