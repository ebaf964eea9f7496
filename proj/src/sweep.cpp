#include "slp/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace slp {

void SweepResult::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw Error(ErrorCode::DimensionMismatch, "row width " + std::to_string(row.size()) + " != " +
                                                      std::to_string(columns.size()) + " columns");
    }
    rows.push_back(std::move(row));
}

int SweepResult::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

double SweepResult::number(std::size_t row, int col) const {
    const Cell& c = rows.at(row).at(static_cast<std::size_t>(col));
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    throw Error(ErrorCode::BadParameter, "column " + columns[static_cast<std::size_t>(col)] + " is not numeric");
}

void SweepResult::check_flags() const {
    const int masked = column("masked");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (const Cell& c : rows[r]) {
            const auto* d = std::get_if<double>(&c);
            if (!d || !std::isnan(*d)) continue;
            if (masked < 0 || number(r, masked) != 1.0) {
                throw Error(ErrorCode::BadParameter, "NaN without a masked flag in row " + std::to_string(r));
            }
        }
    }
}

std::string config_hash(const Json& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : config.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

Json metadata(const SweepResult& r) {
    Json m = Json::object();
    m["tool_version"] = kToolVersion;
    m["seed"] = r.seed;
    m["config_hash"] = config_hash(r.config);
    m["config"] = r.config;
    for (auto it = r.extra.begin(); it != r.extra.end(); ++it) m[it.key()] = it.value();
    return m;
}

}  // namespace

void write_csv(std::ostream& os, const SweepResult& r) {
    r.check_flags();
    const Json meta = metadata(r);
    for (auto it = meta.begin(); it != meta.end(); ++it) {
        os << "# " << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << '\n';
    }
    for (std::size_t c = 0; c < r.columns.size(); ++c) os << (c ? "," : "") << r.columns[c];
    os << '\n';
    for (const auto& row : r.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << cell_text(row[c]);
        os << '\n';
    }
}

Json to_json(const SweepResult& r) {
    r.check_flags();
    Json j = Json::object();
    j["columns"] = r.columns;
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        Json jr = Json::array();
        for (const Cell& c : row) {
            if (const auto* d = std::get_if<double>(&c)) {
                if (std::isfinite(*d)) {
                    jr.push_back(*d);
                } else if (std::isnan(*d)) {
                    jr.push_back(nullptr);
                } else {
                    jr.push_back(format_double(*d));
                }
            } else if (const auto* i = std::get_if<std::int64_t>(&c)) {
                jr.push_back(*i);
            } else {
                jr.push_back(std::get<std::string>(c));
            }
        }
        rows.push_back(std::move(jr));
    }
    j["rows"] = std::move(rows);
    j["metadata"] = metadata(r);
    return j;
}

namespace {

constexpr double kSvgSize = 480.0;
constexpr double kMargin = 40.0;

std::string grey(double level) {
    const int v = static_cast<int>(std::lround(255.0 * (1.0 - std::clamp(level, 0.0, 1.0))));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", v, v, v);
    return buf;
}

}  // namespace

void write_omega_svg(std::ostream& os, const SweepResult& r, const std::vector<std::pair<double, double>>& overlay) {
    const int cx = r.column("delta0"), cy = r.column("delta1"), cw = r.column("omega"), cm = r.column("masked");
    if (cx < 0 || cy < 0 || cw < 0 || cm < 0) {
        throw Error(ErrorCode::BadParameter, "omega svg needs delta0, delta1, omega, masked columns");
    }
    // Recover the rectangular grid from the row data.
    std::map<double, int> xs, ys;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        xs.emplace(r.number(i, cx), 0);
        ys.emplace(r.number(i, cy), 0);
    }
    int k = 0;
    for (auto& [v, idx] : xs) idx = k++;
    k = 0;
    for (auto& [v, idx] : ys) idx = k++;
    const int nx = static_cast<int>(xs.size()), ny = static_cast<int>(ys.size());
    std::vector<double> grid(static_cast<std::size_t>(nx * ny), std::nan(""));
    double top = 0.0;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        if (r.number(i, cm) == 1.0) continue;
        const double w = r.number(i, cw);
        grid[static_cast<std::size_t>(xs[r.number(i, cx)] * ny + ys[r.number(i, cy)])] = w;
        top = std::max(top, w);
    }
    const double x0 = xs.begin()->first, x1 = xs.rbegin()->first;
    const double y0 = ys.begin()->first, y1 = ys.rbegin()->first;
    const double span = kSvgSize - 2 * kMargin;
    auto px = [&](double x) { return kMargin + span * (x - x0) / (x1 - x0); };
    auto py = [&](double y) { return kSvgSize - kMargin - span * (y - y0) / (y1 - y0); };
    const double cell_w = span / std::max(1, nx - 1), cell_h = span / std::max(1, ny - 1);

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgSize << "\" height=\"" << kSvgSize
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g stroke=\"none\">\n";
    for (auto& [xv, i] : xs)
        for (auto& [yv, j] : ys) {
            const double w = grid[static_cast<std::size_t>(i * ny + j)];
            if (std::isnan(w)) continue;
            os << "<rect x=\"" << px(xv) - cell_w / 2 << "\" y=\"" << py(yv) - cell_h / 2 << "\" width=\"" << cell_w
               << "\" height=\"" << cell_h << "\" fill=\"" << grey(top > 0 ? w / top : 0.0) << "\"/>\n";
        }
    os << "</g>\n";

    // Marching squares on omega = level: boundary of the zero region.
    constexpr double kLevel = 1e-12;
    std::vector<double> xv, yv;
    for (auto& [v, i] : xs) xv.push_back(v);
    for (auto& [v, j] : ys) yv.push_back(v);
    os << "<g stroke=\"red\" stroke-width=\"1.5\" fill=\"none\">\n";
    auto at = [&](int i, int j) { return grid[static_cast<std::size_t>(i * ny + j)]; };
    for (int i = 0; i + 1 < nx; ++i)
        for (int j = 0; j + 1 < ny; ++j) {
            const double c[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
            if (std::any_of(c, c + 4, [](double v) { return std::isnan(v); })) continue;
            const double cxs[4] = {xv[i], xv[i + 1], xv[i + 1], xv[i]};
            const double cys[4] = {yv[j], yv[j], yv[j + 1], yv[j + 1]};
            std::vector<std::pair<double, double>> pts;
            for (int e = 0; e < 4; ++e) {
                const int f = (e + 1) % 4;
                const bool a = c[e] > kLevel, b = c[f] > kLevel;
                if (a == b) continue;
                const double t = (kLevel - c[e]) / (c[f] - c[e]);
                pts.emplace_back(cxs[e] + t * (cxs[f] - cxs[e]), cys[e] + t * (cys[f] - cys[e]));
            }
            for (std::size_t p = 0; p + 1 < pts.size(); p += 2) {
                os << "<line x1=\"" << px(pts[p].first) << "\" y1=\"" << py(pts[p].second) << "\" x2=\""
                   << px(pts[p + 1].first) << "\" y2=\"" << py(pts[p + 1].second) << "\"/>\n";
            }
        }
    os << "</g>\n";
    if (!overlay.empty()) {
        os << "<polyline fill=\"none\" stroke=\"blue\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : overlay) os << px(x) << ',' << py(y) << ' ';
        os << "\"/>\n";
    }
    os << "<text x=\"" << kSvgSize / 2 << "\" y=\"" << kSvgSize - 10 << "\" text-anchor=\"middle\">delta0</text>\n"
       << "<text x=\"12\" y=\"" << kSvgSize / 2 << "\" transform=\"rotate(-90 12 " << kSvgSize / 2
       << ")\" text-anchor=\"middle\">delta1</text>\n</svg>\n";
}

void write_curve_svg(std::ostream& os, const SweepResult& r, const std::string& x_col, const std::string& y_col,
                     const std::string& series_col) {
    const int cx = r.column(x_col), cy = r.column(y_col), cs = r.column(series_col);
    if (cx < 0 || cy < 0 || cs < 0) throw Error(ErrorCode::BadParameter, "curve svg: unknown column");
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    double xmin = INFINITY, xmax = -INFINITY, ymax = 0.0;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const double x = r.number(i, cx), y = r.number(i, cy);
        if (!std::isfinite(y)) continue;
        series[cell_text(r.rows[i][static_cast<std::size_t>(cs)])].emplace_back(x, y);
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymax = std::max(ymax, y);
    }
    if (series.empty()) xmin = 0.0, xmax = 1.0;
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == 0.0) ymax = 1.0;
    const double span = kSvgSize - 2 * kMargin;
    auto px = [&](double x) { return kMargin + span * (x - xmin) / (xmax - xmin); };
    auto py = [&](double y) { return kSvgSize - kMargin - span * y / ymax; };
    static const char* palette[] = {"black", "red", "blue", "green", "orange", "purple", "brown", "teal"};
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgSize << "\" height=\"" << kSvgSize
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::size_t s = 0;
    for (const auto& [name, pts] : series) {
        const char* colour = palette[s++ % 8];
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" points=\"";
        for (const auto& [x, y] : pts) os << px(x) << ',' << py(y) << ' ';
        os << "\"/>\n<text x=\"" << kSvgSize - kMargin << "\" y=\"" << kMargin + 14.0 * static_cast<double>(s)
           << "\" fill=\"" << colour << "\" text-anchor=\"end\">" << series_col << '=' << name << "</text>\n";
    }
    os << "<text x=\"" << kSvgSize / 2 << "\" y=\"" << kSvgSize - 10 << "\" text-anchor=\"middle\">" << x_col
       << "</text>\n<text x=\"12\" y=\"" << kSvgSize / 2 << "\" transform=\"rotate(-90 12 " << kSvgSize / 2
       << ")\" text-anchor=\"middle\">" << y_col << "</text>\n</svg>\n";
}

Json model_to_json(const SystemModel& m) {
    Json j = Json::object();
    j["kind"] = std::string(to_string(m.kind));
    Json p = Json::object();
    p["kappa"] = m.params.kappa;
    p["gamma"] = m.params.gamma;
    p["n"] = m.params.n;
    p["coupling"] = m.params.coupling == Coupling::antiferro ? "antiferro" : "ferro";
    p["negated"] = m.negated;
    j["params"] = std::move(p);
    j["dim"] = m.dim();
    Json e = Json::array();
    for (int k = 0; k < m.dim(); ++k) e.push_back(m.hamiltonian.energy(k));
    j["energies"] = std::move(e);
    return j;
}

Json kraus_to_json(const KrausSet& ks) {
    Json ops = Json::array();
    for (const auto& k : ks.ops) {
        Json rows = Json::array();
        for (Eigen::Index i = 0; i < k.rows(); ++i) {
            Json row = Json::array();
            for (Eigen::Index j = 0; j < k.cols(); ++j) row.push_back(Json::array({k(i, j).real(), k(i, j).imag()}));
            rows.push_back(std::move(row));
        }
        ops.push_back(std::move(rows));
    }
    return ops;
}

KrausSet kraus_from_json(const Json& j) {
    if (!j.is_array()) throw Error(ErrorCode::BadParameter, "Kraus JSON must be an array of operators");
    KrausSet ks;
    for (const auto& op : j) {
        const auto d = static_cast<Eigen::Index>(op.size());
        ComplexMatrix k(d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
            const auto& row = op.at(static_cast<std::size_t>(i));
            if (static_cast<Eigen::Index>(row.size()) != d) {
                throw Error(ErrorCode::NonSquare, "Kraus operator rows must match its row count");
            }
            for (Eigen::Index c = 0; c < d; ++c) {
                const auto& z = row.at(static_cast<std::size_t>(c));
                k(i, c) = cplx(z.at(0).get<double>(), z.at(1).get<double>());
            }
        }
        ks.ops.push_back(std::move(k));
    }
    return ks;
}

}  // namespace slp
