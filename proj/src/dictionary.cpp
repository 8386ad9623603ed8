#include "shearnet/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "shearnet/error.hpp"
#include "shearnet/parallel.hpp"

namespace shearnet {

namespace {

struct ParamsPrinter {
    std::string operator()(const HaarParams& p) const {
        return "haar(a=" + std::to_string(p.scale) + ", t=" + std::to_string(p.shift) + ")";
    }
    std::string operator()(const ShearletParams& p) const {
        return "shearlet(a=" + std::to_string(p.scale) + ", s=" + std::to_string(p.shear) + ", t=(" +
               std::to_string(p.t1) + ", " + std::to_string(p.t2) + "))";
    }
    std::string operator()(const IndexParams& p) const { return "atom#" + std::to_string(p.id); }
};

struct ParamsJson {
    nlohmann::json operator()(const HaarParams& p) const {
        return {{"family", "haar"}, {"a", p.scale}, {"t", p.shift}};
    }
    nlohmann::json operator()(const ShearletParams& p) const {
        return {{"family", "shearlet"}, {"a", p.scale}, {"s", p.shear}, {"t", {p.t1, p.t2}}};
    }
    nlohmann::json operator()(const IndexParams& p) const {
        return {{"family", "custom"}, {"id", p.id}};
    }
};

double dot_dense(const SparseVector& origin, Shift shift, const Grid& grid,
                 const std::vector<double>& dense) {
    double s = 0.0;
    for (const auto& e : origin) s += e.value * dense[translate_index(e.index, shift, grid)];
    return s;
}

}  // namespace

std::string to_string(const AtomParams& p) { return std::visit(ParamsPrinter{}, p); }

nlohmann::json params_json(const AtomParams& p) { return std::visit(ParamsJson{}, p); }

Dictionary::Dictionary(Grid grid, Provenance provenance, std::vector<Slice> slices)
    : Dictionary(grid, std::move(provenance), std::move(slices), true) {}

Dictionary::Dictionary(Grid grid, Provenance provenance, std::vector<Slice> slices, bool structured)
    : grid_(grid), provenance_(std::move(provenance)), slices_(std::move(slices)), structured_(structured) {
    offsets_.reserve(slices_.size() + 1);
    offsets_.push_back(0);
    for (const auto& s : slices_) {
        validate_atom(s.origin, grid_);
        offsets_.push_back(offsets_.back() + s.members.size());
    }
    if (offsets_.back() == 0) throw EmptyDictionary("dictionary has no atoms");
}

Dictionary Dictionary::from_atoms(Grid grid, Provenance provenance, std::vector<Atom> atoms) {
    std::vector<Slice> slices;
    slices.reserve(atoms.size());
    for (auto& a : atoms) {
        Member m{Shift{}, a.params};
        slices.push_back(Slice{std::move(a), {m}});
    }
    return Dictionary(grid, std::move(provenance), std::move(slices), false);
}

Dictionary::Location Dictionary::locate(std::size_t j) const {
    if (j >= size()) throw ParameterError("atom index " + std::to_string(j) + " out of range");
    const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), j);
    const auto slice = static_cast<std::size_t>(it - offsets_.begin()) - 1;
    return {slice, j - offsets_[slice]};
}

const AtomParams& Dictionary::params(std::size_t j) const {
    const auto loc = locate(j);
    return slices_[loc.slice].members[loc.member].params;
}

Atom Dictionary::atom(std::size_t j) const {
    const auto loc = locate(j);
    const auto& s = slices_[loc.slice];
    return translate(s.origin, s.members[loc.member], grid_);
}

nlohmann::json Dictionary::manifest() const {
    return {
        {"family", provenance_.family},
        {"variant", provenance_.variant},
        {"n", grid_.n},
        {"dims", grid_.dims},
        {"parameters", provenance_.parameters},
        {"atom_count", size()},
        {"slice_count", slices_.size()},
        {"translation_structured", structured_},
    };
}

Atom translate(const Atom& origin, const Member& member, const Grid& grid) {
    Atom out{member.params, origin.support, origin.raw_norm};
    if (member.shift != Shift{}) {
        for (auto& e : out.support) e.index = translate_index(e.index, member.shift, grid);
        std::sort(out.support.begin(), out.support.end(),
                  [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
    }
    return out;
}

SparseVector unit_normalize(SparseVector values) {
    double s = 0.0;
    for (const auto& e : values) s += e.value * e.value;
    if (!(s > 0.0)) throw DegenerateAtom("cannot normalize a zero vector");
    const double inv = 1.0 / std::sqrt(s);
    for (auto& e : values) e.value *= inv;
    return values;
}

void validate_atom(const Atom& atom, const Grid& grid) {
    double s = 0.0;
    std::uint32_t prev = 0;
    bool first = true;
    for (const auto& e : atom.support) {
        if (e.index >= grid.size())
            throw ParameterError(to_string(atom.params) + ": support index outside the grid");
        if (!first && e.index <= prev)
            throw ParameterError(to_string(atom.params) + ": support not sorted or has duplicates");
        prev = e.index;
        first = false;
        s += e.value * e.value;
    }
    if (std::abs(std::sqrt(s) - 1.0) > 1e-9)
        throw DegenerateAtom(to_string(atom.params) + ": atom is not unit norm");
}

double inner(const Atom& atom, const Signal& x) {
    double s = 0.0;
    for (const auto& e : atom.support) {
        if (e.index >= x.size()) throw GridMismatch("atom support exceeds the signal grid");
        s += e.value * x[e.index];
    }
    return s;
}

double inner_translated(const SparseVector& origin, Shift shift, const Signal& x) {
    double s = 0.0;
    for (const auto& e : origin) s += e.value * x[translate_index(e.index, shift, x.grid())];
    return s;
}

double inner(const Atom& g, const Atom& h) {
    // Both supports are sorted by index.
    double s = 0.0;
    auto a = g.support.begin();
    auto b = h.support.begin();
    while (a != g.support.end() && b != h.support.end()) {
        if (a->index < b->index) {
            ++a;
        } else if (b->index < a->index) {
            ++b;
        } else {
            s += a->value * b->value;
            ++a;
            ++b;
        }
    }
    return s;
}

double delta_metric(const Atom& g, const Atom& h) { return std::sqrt(std::max(0.0, 1.0 - inner(g, h))); }

NearestResult nearest_atom(const Dictionary& sub, const Atom& g) {
    const Grid& grid = sub.grid();
    std::vector<double> dense(grid.size(), 0.0);
    for (const auto& e : g.support) {
        if (e.index >= grid.size()) throw GridMismatch("query atom exceeds the dictionary grid");
        dense[e.index] = e.value;
    }
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    std::size_t j = 0;
    for (const auto& s : sub.slices()) {
        for (const auto& m : s.members) {
            const double d = std::sqrt(std::max(0.0, 1.0 - dot_dense(s.origin.support, m.shift, grid, dense)));
            if (d < best) {
                best = d;
                best_j = j;
            }
            ++j;
        }
    }
    return {sub.atom(best_j), best, best_j};
}

NetResult epsnet_maxmin(const Dictionary& full, const Dictionary& sub, double pair_cap) {
    if (full.grid() != sub.grid()) throw GridMismatch("epsnet_maxmin: dictionaries on different grids");
    const double pairs = static_cast<double>(full.size()) * static_cast<double>(sub.size());
    if (pairs > pair_cap) {
        std::ostringstream msg;
        msg << "brute-force net check needs " << full.size() << " x " << sub.size() << " = " << pairs
            << " inner products, above the cap of " << pair_cap;
        throw CapExceeded(msg.str());
    }
    const Grid& grid = full.grid();
    const std::size_t npix = grid.size();
    const std::size_t nsub = sub.size();
    const std::size_t nfull = full.size();

    // Sub atoms are densified pixel-major in column blocks; each full atom is
    // then a sparse combination of block rows.
    const std::size_t block = std::clamp<std::size_t>((std::size_t{1} << 22) / npix, 256, 4096);
    std::vector<double> best(nfull, -std::numeric_limits<double>::infinity());

    // Flat list of (slice, member) for the full dictionary.
    std::vector<Dictionary::Location> full_loc;
    full_loc.reserve(nfull);
    for (std::size_t s = 0; s < full.slices().size(); ++s)
        for (std::size_t m = 0; m < full.slices()[s].members.size(); ++m) full_loc.push_back({s, m});

    std::vector<Dictionary::Location> sub_loc;
    sub_loc.reserve(nsub);
    for (std::size_t s = 0; s < sub.slices().size(); ++s)
        for (std::size_t m = 0; m < sub.slices()[s].members.size(); ++m) sub_loc.push_back({s, m});

    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(worker_count(), nfull));
    const std::size_t per_worker = (nfull + workers - 1) / workers;
    std::vector<double> dense;

    for (std::size_t c0 = 0; c0 < nsub; c0 += block) {
        const std::size_t width = std::min(block, nsub - c0);
        dense.assign(npix * width, 0.0);
        for (std::size_t k = 0; k < width; ++k) {
            const auto loc = sub_loc[c0 + k];
            const auto& slice = sub.slices()[loc.slice];
            const Shift shift = slice.members[loc.member].shift;
            for (const auto& e : slice.origin.support)
                dense[translate_index(e.index, shift, grid) * width + k] = e.value;
        }
        parallel_for(workers, [&](std::size_t w) {
            std::vector<double> scores(width);
            const std::size_t lo = w * per_worker;
            const std::size_t hi = std::min(nfull, lo + per_worker);
            for (std::size_t f = lo; f < hi; ++f) {
                const auto loc = full_loc[f];
                const auto& slice = full.slices()[loc.slice];
                const Shift shift = slice.members[loc.member].shift;
                std::fill(scores.begin(), scores.end(), 0.0);
                for (const auto& e : slice.origin.support) {
                    const double v = e.value;
                    const double* row = dense.data() + translate_index(e.index, shift, grid) * width;
                    double* out = scores.data();
                    for (std::size_t k = 0; k < width; ++k) out[k] += v * row[k];
                }
                const double mx = *std::max_element(scores.begin(), scores.end());
                if (mx > best[f]) best[f] = mx;
            }
        });
    }

    NetResult result;
    result.value = -1.0;
    for (std::size_t f = 0; f < nfull; ++f) {
        const double d = std::sqrt(std::max(0.0, 1.0 - best[f]));
        if (d > result.value) {
            result.value = d;
            result.witness = f;
        }
    }
    result.witness_params = full.params(result.witness);
    return result;
}

}  // namespace shearnet
