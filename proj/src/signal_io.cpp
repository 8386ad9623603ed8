#include "shearnet/signal_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "shearnet/error.hpp"

namespace shearnet {

namespace {

static_assert(std::endian::native == std::endian::little, "signal I/O assumes a little-endian host");

constexpr std::array<char, 4> kMagic{'S', 'I', 'G', '1'};

template <typename T>
void put(std::ostream& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.write(buf, sizeof(T));
}

template <typename T>
T get(std::istream& in, const char* what) {
    char buf[sizeof(T)];
    if (!in.read(buf, sizeof(T))) throw FormatError(std::string("signal file truncated while reading ") + what);
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

std::string extension_of(const std::filesystem::path& p) {
    auto e = p.extension().string();
    for (auto& c : e) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return e;
}

double parse_double(std::string_view field, std::size_t line) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
        field.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
        throw FormatError("CSV line " + std::to_string(line) + ": cannot parse '" + std::string(field) + "'");
    return v;
}

}  // namespace

void write_signal_binary(std::ostream& out, const Signal& x) {
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, static_cast<std::uint32_t>(x.grid().dims));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(x.grid().n));
    for (const double v : x.values()) put<double>(out, v);
    if (!out) throw FormatError("failed to write signal");
}

Signal read_signal_binary(std::istream& in) {
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size())) throw FormatError("signal file truncated in header");
    if (magic != kMagic) throw FormatError("not a SIG1 signal file");
    const auto dims = get<std::uint32_t>(in, "dims");
    const auto n = get<std::uint64_t>(in, "n");
    if (dims != 1 && dims != 2) throw FormatError("signal header has dims " + std::to_string(dims));
    if (n < 2 || n > (1u << 24)) throw FormatError("signal header has implausible n " + std::to_string(n));
    const Grid grid(static_cast<int>(n), static_cast<int>(dims));
    std::vector<double> values(grid.size());
    for (auto& v : values) v = get<double>(in, "values");
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after signal values");
    try {
        return Signal(grid, std::move(values));
    } catch (const ParameterError& e) {
        throw FormatError(e.what());
    }
}

void write_signal_csv(std::ostream& out, const Signal& x) {
    out.precision(17);
    const Grid& g = x.grid();
    if (g.dims == 1) {
        for (const double v : x.values()) out << v << '\n';
    } else {
        const auto n = static_cast<std::size_t>(g.n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                if (c) out << ',';
                out << x[r * n + c];
            }
            out << '\n';
        }
    }
    if (!out) throw FormatError("failed to write CSV signal");
}

Signal read_signal_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            row.push_back(parse_double(rest.substr(0, comma), lineno));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw FormatError("empty CSV signal");
    const std::size_t width = rows.front().size();
    std::vector<double> values;
    if (width == 1) {
        for (const auto& r : rows) {
            if (r.size() != 1) throw FormatError("CSV signal mixes 1D and 2D rows");
            values.push_back(r[0]);
        }
        const auto n = static_cast<int>(values.size());
        try {
            return Signal(Grid(n, 1), std::move(values));
        } catch (const Error& e) {
            throw FormatError(e.what());
        }
    }
    if (rows.size() != width) throw FormatError("2D CSV signal must be n rows of n columns");
    for (const auto& r : rows) {
        if (r.size() != width) throw FormatError("2D CSV signal has ragged rows");
        values.insert(values.end(), r.begin(), r.end());
    }
    try {
        return Signal(Grid(static_cast<int>(width), 2), std::move(values));
    } catch (const Error& e) {
        throw FormatError(e.what());
    }
}

void save_signal(const std::filesystem::path& path, const Signal& x) {
    const bool csv = extension_of(path) == ".csv";
    std::ofstream out(path, csv ? std::ios::out : std::ios::out | std::ios::binary);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    if (csv)
        write_signal_csv(out, x);
    else
        write_signal_binary(out, x);
}

Signal load_signal(const std::filesystem::path& path) {
    const bool csv = extension_of(path) == ".csv";
    std::ifstream in(path, csv ? std::ios::in : std::ios::in | std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    return csv ? read_signal_csv(in) : read_signal_binary(in);
}

}  // namespace shearnet
