#include "lorentz/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lorentz/errors.hpp"

namespace lorentz {

namespace {

double parse_double(const std::string &s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw InvalidArgument("bad number in CSV: '" + s + "'");
    return v;
}

std::uint64_t parse_u64(const std::string &s) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw InvalidArgument("bad integer in CSV: '" + s + "'");
    return v;
}

const std::string &need(const std::map<std::string, std::string> &meta, const std::string &key) {
    const auto it = meta.find(key);
    if (it == meta.end()) throw InvalidArgument("CSV metadata lacks '" + key + "'");
    return it->second;
}

std::vector<std::string> split(const std::string &line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    return out;
}

void expect_header(std::istream &is, const std::string &header) {
    std::string line;
    if (!std::getline(is, line) || line != header)
        throw InvalidArgument("expected CSV header '" + header + "', got '" + line + "'");
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::string join_doubles(const std::vector<double> &v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

void write_meta(std::ostream &os, const CsvMeta &meta) {
    for (const auto &[k, v] : meta) os << "# " << k << '=' << v << '\n';
}

std::map<std::string, std::string> read_meta(std::istream &is) {
    std::map<std::string, std::string> meta;
    while (is.peek() == '#') {
        std::string line;
        std::getline(is, line);
        const auto eq = line.find('=');
        if (line.size() < 2 || eq == std::string::npos) continue;
        meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
    }
    return meta;
}

void write_histogram_csv(std::ostream &os, const TransitionHistogram &h, const CsvMeta &extra) {
    const HistogramSpec &sp = h.spec();
    CsvMeta meta{{"kind", "transition_histogram"},
                 {"h_prime", format_double(h.h_prime())},
                 {"r", h.r ? format_double(*h.r) : std::string("limit")},
                 {"n", std::to_string(h.total())},
                 {"seed", std::to_string(h.seed)},
                 {"s_bins", std::to_string(sp.s_bins)},
                 {"s_max", format_double(sp.s_max)},
                 {"h_bins", std::to_string(sp.h_bins)},
                 {"s_edges", join_doubles(h.s_edges())},
                 {"h_edges", join_doubles(h.h_edges())},
                 {"overflow", format_double(h.overflow())},
                 {"skipped", std::to_string(h.skipped)}};
    meta.insert(meta.end(), extra.begin(), extra.end());
    write_meta(os, meta);
    os << "s_bin,h_bin,count\n";
    for (std::size_t si = 0; si < sp.s_bins; ++si)
        for (std::size_t hi = 0; hi < sp.h_bins; ++hi)
            if (const double c = h.count(si, hi); c != 0.0) os << si << ',' << hi << ',' << format_double(c) << '\n';
}

TransitionHistogram read_histogram_csv(std::istream &is) {
    const auto meta = read_meta(is);
    if (need(meta, "kind") != "transition_histogram") throw InvalidArgument("not a transition histogram CSV");
    HistogramSpec sp;
    sp.s_bins = parse_u64(need(meta, "s_bins"));
    sp.s_max = parse_double(need(meta, "s_max"));
    sp.h_bins = parse_u64(need(meta, "h_bins"));
    TransitionHistogram h(sp, parse_double(need(meta, "h_prime")));
    if (const auto &r = need(meta, "r"); r != "limit") h.r = parse_double(r);
    h.seed = parse_u64(need(meta, "seed"));
    h.skipped = parse_u64(need(meta, "skipped"));
    h.set_overflow(parse_double(need(meta, "overflow")));
    h.set_total(parse_u64(need(meta, "n")));
    expect_header(is, "s_bin,h_bin,count");
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 3) throw InvalidArgument("histogram row needs 3 columns: '" + line + "'");
        const auto si = parse_u64(cells[0]);
        const auto hi = parse_u64(cells[1]);
        if (si >= sp.s_bins || hi >= sp.h_bins) throw InvalidArgument("histogram bin out of range");
        h.count(si, hi) = parse_double(cells[2]);
    }
    return h;
}

void write_density_csv(std::ostream &os, const DensityGrid &g, const CsvMeta &extra) {
    const GridSpec &sp = g.spec();
    CsvMeta meta{{"kind", "density_grid"},
                 {"solver", g.solver},
                 {"t", format_double(g.t())},
                 {"r", g.r ? format_double(*g.r) : std::string("limit")},
                 {"n", std::to_string(g.n)},
                 {"seed", std::to_string(g.seed)},
                 {"half_width", format_double(sp.half_width)},
                 {"center_x", format_double(sp.center.x)},
                 {"center_y", format_double(sp.center.y)},
                 {"nx", std::to_string(sp.nx)},
                 {"ny", std::to_string(sp.ny)},
                 {"ntheta", std::to_string(sp.ntheta)},
                 {"overflow", format_double(g.overflow())}};
    meta.insert(meta.end(), extra.begin(), extra.end());
    write_meta(os, meta);
    os << "x_bin,y_bin,theta_bin,weight\n";
    for (std::size_t ix = 0; ix < sp.nx; ++ix)
        for (std::size_t iy = 0; iy < sp.ny; ++iy)
            for (std::size_t it = 0; it < sp.ntheta; ++it)
                if (const double w = g.weight(ix, iy, it); w != 0.0)
                    os << ix << ',' << iy << ',' << it << ',' << format_double(w) << '\n';
}

DensityGrid read_density_csv(std::istream &is) {
    const auto meta = read_meta(is);
    if (need(meta, "kind") != "density_grid") throw InvalidArgument("not a density grid CSV");
    GridSpec sp;
    sp.half_width = parse_double(need(meta, "half_width"));
    sp.center = {parse_double(need(meta, "center_x")), parse_double(need(meta, "center_y"))};
    sp.nx = parse_u64(need(meta, "nx"));
    sp.ny = parse_u64(need(meta, "ny"));
    sp.ntheta = parse_u64(need(meta, "ntheta"));
    DensityGrid g(sp, parse_double(need(meta, "t")));
    g.solver = need(meta, "solver");
    if (const auto &r = need(meta, "r"); r != "limit") g.r = parse_double(r);
    g.n = parse_u64(need(meta, "n"));
    g.seed = parse_u64(need(meta, "seed"));
    g.overflow() = parse_double(need(meta, "overflow"));
    expect_header(is, "x_bin,y_bin,theta_bin,weight");
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 4) throw InvalidArgument("density row needs 4 columns: '" + line + "'");
        const auto ix = parse_u64(cells[0]);
        const auto iy = parse_u64(cells[1]);
        const auto it = parse_u64(cells[2]);
        if (ix >= sp.nx || iy >= sp.ny || it >= sp.ntheta) throw InvalidArgument("density cell out of range");
        g.weight(ix, iy, it) = parse_double(cells[3]);
    }
    return g;
}

void write_file_atomic(const std::filesystem::path &path, const std::function<void(std::ostream &)> &writer) {
    auto tmp = path;
    tmp += ".tmp";
    try {
        {
            std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
            if (!os) throw Error("cannot open " + tmp.string() + " for writing");
            writer(os);
            os.flush();
            if (!os) throw Error("write to " + tmp.string() + " failed");
        }
        std::filesystem::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw;
    }
}

} // namespace lorentz
