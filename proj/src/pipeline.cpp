#include "starry/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "starry/dimension.hpp"
#include "starry/error.hpp"
#include "starry/excursion.hpp"
#include "starry/io.hpp"
#include "starry/plot.hpp"
#include "starry/snake.hpp"
#include "starry/stars.hpp"
#include "starry/tree_metric.hpp"

namespace starry {

Subcommand parse_subcommand(const std::string& name) {
    if (name == "sample") return Subcommand::sample;
    if (name == "tree") return Subcommand::tree;
    if (name == "map") return Subcommand::map;
    if (name == "stars") return Subcommand::stars;
    if (name == "assouad") return Subcommand::assouad;
    if (name == "obstruct") return Subcommand::obstruct;
    if (name == "example51") return Subcommand::example51;
    if (name == "counterexample") return Subcommand::counterexample;
    throw InvalidArgument("unknown subcommand: " + name);
}

void validate(const RunConfig& config) {
    if (config.grid_n < 16 || !std::has_single_bit(config.grid_n)) {
        throw InvalidArgument("--grid must be a power of two >= 16");
    }
    const bool uses_subset = config.subcommand == Subcommand::map ||
                             (config.subcommand == Subcommand::stars && config.metric == "map");
    if (uses_subset && config.subset_m > config.grid_n) throw InvalidArgument("--subset must not exceed --grid");
    if (config.threads < 1) throw InvalidArgument("--threads must be >= 1");
}

namespace {

std::ifstream open_in(const std::string& path) {
    if (path.empty()) throw InvalidArgument("--in is required");
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    if (path.empty()) throw InvalidArgument("--out is required");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path);
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

ExcursionGrid load_grid(const RunConfig& config) {
    auto in = open_in(config.in);
    return io::read_excursion_csv(in);
}

std::function<double(std::size_t)> grid_time(std::size_t n_cells) {
    return [n_cells](std::size_t i) { return static_cast<double>(i) / static_cast<double>(n_cells); };
}

std::vector<std::size_t> stride_points(std::size_t n_cells, std::size_t count) {
    count = std::clamp<std::size_t>(count, 1, n_cells);
    std::vector<std::size_t> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = k * n_cells / count;
    return out;
}

void cmd_sample(const RunConfig& c, std::ostream& log) {
    const auto grid = [&]() -> ExcursionGrid {
        if (c.kind == "brownian") return brownian_excursion(c.grid_n, c.seed);
        if (c.kind == "example51") return example51_grid(c.grid_n, c.series_terms);
        if (c.kind.rfind("zigzag:", 0) == 0) {
            const std::string digits = c.kind.substr(7);
            int n = 0;
            const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
            if (ec != std::errc{} || end != digits.data() + digits.size() || n < 1) {
                throw InvalidArgument("zigzag order must be a positive integer");
            }
            return zigzag_grid(n, c.grid_n);
        }
        throw InvalidArgument("--kind must be brownian, zigzag:<n> or example51");
    }();
    auto out = open_out(c.out);
    io::write_excursion_csv(out, grid);
    if (!c.plot.empty()) write_text(c.plot, plot_excursion(grid));
    log << "sample " << grid.provenance().describe() << " n_cells=" << grid.n_cells() << '\n';
}

void cmd_tree(const RunConfig& c, std::ostream& log) {
    const TreeMetric tm(load_grid(c));
    const auto leaves = tm.leaves();
    if (!c.leaves.empty()) {
        auto out = open_out(c.leaves);
        out << "i,t,f\n";
        for (const auto i : leaves) {
            out << i << ',' << io::format_real(tm.grid().t(i)) << ',' << io::format_real(tm.grid()[i]) << '\n';
        }
    }
    std::vector<std::size_t> pts;
    if (!leaves.empty()) {
        const std::size_t count = std::min(c.points, leaves.size());
        for (std::size_t k = 0; k < count; ++k) pts.push_back(leaves[k * leaves.size() / count]);
    } else {
        pts = stride_points(tm.n_cells(), c.points);
    }
    auto out = open_out(c.out);
    out << "i,j,d\n";
    for (std::size_t a = 0; a < pts.size(); ++a) {
        for (std::size_t b = a + 1; b < pts.size(); ++b) {
            out << pts[a] << ',' << pts[b] << ',' << io::format_real(tm.dist(pts[a], pts[b])) << '\n';
        }
    }
    log << "tree n_cells=" << tm.n_cells() << " leaves=" << leaves.size() << " points=" << pts.size() << '\n';
}

SubsetStrategy parse_strategy(const std::string& s) {
    if (s == "stride") return SubsetStrategy::uniform_stride;
    if (s == "extremes") return SubsetStrategy::include_extremes;
    throw InvalidArgument("--strategy must be stride or extremes");
}

void cmd_map(const RunConfig& c, std::ostream& log) {
    const TreeMetric tm(load_grid(c));
    const auto sl = simulate_labels(tm, c.seed);
    const auto mm = map_metric(sl, c.subset_m, parse_strategy(c.strategy), c.threads);
    const auto bounds = check_bounds(sl, tm, mm);
    auto out = open_out(c.out);
    io::write_map_csv(out, mm);
    log << "map m=" << mm.size() << " pairs=" << bounds.pairs << " upper_violations=" << bounds.upper_violations
        << " lca_negative=" << bounds.lca_negative << " label_negative=" << bounds.label_negative << '\n';
}

std::vector<std::size_t> star_lengths(int n, std::size_t n_cells) {
    std::vector<std::size_t> out;
    for (std::size_t len = std::bit_ceil(static_cast<std::size_t>(4 * n)); len <= n_cells / 4; len *= 2) {
        out.push_back(len);
    }
    return out;
}

void cmd_stars(const RunConfig& c, std::ostream& log) {
    if (c.n_min < 2 || c.n_max < c.n_min) throw InvalidArgument("need 2 <= --n-min <= --n-max");
    if (c.metric != "tree" && c.metric != "map") throw InvalidArgument("--metric must be tree or map");
    const TreeMetric tm(load_grid(c));
    const std::size_t n_cells = tm.n_cells();
    const auto time_of = grid_time(n_cells);
    const bool use_map = c.metric == "map";

    nlohmann::json doc;
    doc["grid"] = n_cells;
    doc["metric"] = c.metric;
    doc["table"] = nlohmann::json::array();
    doc["stars"] = nlohmann::json::array();
    std::optional<StarOverlay> overlay;

    std::optional<SnakeLabels> labels;
    if (use_map) labels.emplace(simulate_labels(tm, c.seed));

    for (int n = c.n_min; n <= c.n_max; ++n) {
        const auto lengths = star_lengths(n, n_cells);
        const auto matches = lengths.empty() ? std::vector<WindowMatch>{}
                                             : scan_windows(tm.grid(), n, lengths, c.threads);
        std::size_t certified = 0;
        nlohmann::json row{{"n", n}, {"matches", matches.size()}};
        if (!use_map && n >= 6) {
            const auto k = zigzag_star_constants(n);
            row["a"] = k.a;
            row["eta"] = k.eta;
        }
        std::optional<MapMetric> mm;
        if (use_map && !matches.empty()) {
            auto idx = select_subset(*labels, std::min(c.subset_m, n_cells), SubsetStrategy::include_extremes);
            for (const auto& wm : matches) {
                const auto sk = zigzag_skeleton(tm, wm);
                idx.insert(idx.end(), sk.x.begin(), sk.x.end());
                idx.insert(idx.end(), sk.y.begin(), sk.y.end());
            }
            std::sort(idx.begin(), idx.end());
            idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
            mm.emplace(map_metric_on(*labels, std::move(idx), c.threads));
        }
        for (const auto& wm : matches) {
            std::optional<StarCertificate> cert;
            if (use_map) {
                cert = map_star_from_window(tm, *labels, *mm, wm);
            } else if (n >= 6 && wm.cells() >= 4 * static_cast<std::size_t>(n)) {
                cert = star_from_window(tm, wm);
            }
            if (!cert) continue;
            ++certified;
            doc["stars"].push_back(io::star_report(*cert, time_of));
            if (!overlay || cert->n() > overlay->star.n()) overlay = StarOverlay{*cert, wm};
        }
        row["certified"] = certified;
        doc["table"].push_back(row);
        log << "stars n=" << n << " matches=" << matches.size() << " certified=" << certified << '\n';
    }
    write_text(c.out, doc.dump(2) + "\n");
    if (!c.plot.empty()) write_text(c.plot, plot_excursion(tm.grid(), overlay));
}

void cmd_assouad(const RunConfig& c, std::ostream& log) {
    auto in = open_in(c.in);
    std::string header;
    std::getline(in, header);
    in.seekg(0);
    if (!header.empty() && header.back() == '\r') header.pop_back();

    std::vector<std::size_t> ids;
    Distance d;
    std::optional<TreeMetric> tm;
    std::vector<std::vector<double>> coords;
    std::function<std::string(std::size_t)> label;
    if (header == "t,f") {
        tm.emplace(io::read_excursion_csv(in));
        ids = stride_points(tm->n_cells(), c.points);
        d = [&tm](std::size_t i, std::size_t j) { return tm->dist(i, j); };
        label = [](std::size_t i) { return std::to_string(i); };
    } else {
        coords = io::read_points_csv(in);
        for (std::size_t i = 0; i < coords.size(); ++i) ids.push_back(i);
        d = [&coords](std::size_t i, std::size_t j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < coords[i].size(); ++k) {
                const double diff = coords[i][k] - coords[j][k];
                acc += diff * diff;
            }
            return std::sqrt(acc);
        };
        label = [](std::size_t i) { return std::to_string(i); };
    }
    double diam = 0.0;
    for (std::size_t a = 0; a < ids.size(); ++a) {
        for (std::size_t b = a + 1; b < ids.size(); ++b) diam = std::max(diam, d(ids[a], ids[b]));
    }
    if (!(diam > 0.0)) throw InputError("point set has zero diameter");
    std::vector<ScalePair> pairs;
    for (const double frac : {0.5, 0.25}) {
        for (const double ratio : {4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0}) {
            pairs.push_back({diam * frac, diam * frac / ratio});
        }
    }
    std::vector<std::size_t> centers;
    const std::size_t nc = std::min<std::size_t>(16, ids.size());
    for (std::size_t k = 0; k < nc; ++k) centers.push_back(ids[k * ids.size() / nc]);
    const auto report = assouad_estimate(ids, d, pairs, centers, c.threads);
    auto out = open_out(c.out);
    io::write_assouad_csv(out, report, label);
    log << "assouad points=" << ids.size() << " fitted_alpha=" << io::format_real(report.fitted_alpha)
        << " fitted_C=" << io::format_real(report.fitted_C) << " nonconvergent=" << report.nonconvergent << '\n';
}

void cmd_obstruct(const RunConfig& c, std::ostream& log) {
    if (c.star.empty()) throw InvalidArgument("--star is required");
    std::ifstream in(c.star);
    if (!in) throw InputError("cannot open " + c.star);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("star file is not JSON: ") + e.what());
    }
    const auto summary = io::read_star_summary(doc);
    const auto verdict = qs_obstruction(summary.n, summary.eta, QSProfile::parse(c.psi), c.C, c.s);
    const auto text = io::verdict_json(verdict).dump(2) + "\n";
    if (c.out.empty()) {
        log << text;
    } else {
        write_text(c.out, text);
        log << "obstruct " << verdict.label() << " n=" << verdict.n
            << " threshold=" << io::format_real(verdict.threshold) << '\n';
    }
}

void cmd_example51(const RunConfig& c, std::ostream& log) {
    const auto grid = example51_grid(c.grid_n, c.series_terms);
    {
        auto out = open_out(c.out);
        io::write_excursion_csv(out, grid);
    }
    const TreeMetric tm(grid);
    const auto leaves = tm.leaves();
    const Example51 ex{c.series_terms};
    nlohmann::json doc;
    doc["grid"] = grid.n_cells();
    doc["metric"] = "tree";
    doc["stars"] = nlohmann::json::array();
    std::optional<StarOverlay> overlay;
    const double cells = static_cast<double>(grid.n_cells());
    for (int k = 1; k <= c.series_terms; ++k) {
        const auto lo = static_cast<std::size_t>(std::llround(ex.a(k) * cells));
        const auto hi = static_cast<std::size_t>(std::llround(ex.b(k) * cells));
        std::vector<std::size_t> peaks;
        for (const auto l : leaves) {
            if (l > lo && l < hi) peaks.push_back(l);
        }
        log << "example51 interval " << k << " teeth=" << io::format_real(std::pow(k + 1.0, k))
            << " resolved_peaks=" << peaks.size() << '\n';
        if (peaks.size() < 2) continue;
        const Distance d = [&tm](std::size_t i, std::size_t j) { return tm.dist(i, j); };
        // continuum ratio is exactly 2; a = 2.2 absorbs peaks landing off the grid
        if (auto cert = verify_star(d, lo, peaks, 2.2, 0.45)) {
            doc["stars"].push_back(io::star_report(*cert, grid_time(grid.n_cells())));
            if (!overlay || cert->n() > overlay->star.n()) overlay = StarOverlay{*cert, std::nullopt};
        }
    }
    if (!c.star.empty()) write_text(c.star, doc.dump(2) + "\n");
    if (!c.plot.empty()) write_text(c.plot, plot_excursion(grid, overlay));
}

void cmd_counterexample(const RunConfig& c, std::ostream& log) {
    const int n_max = c.counter_n_max;
    if (n_max < 10) throw InvalidArgument("--nmax must be >= 10 for the counterexample sweep");
    // Rows beyond n+1 only ever need one ball at scale 2^{-n}, so keeping row
    // n_max + 1 makes every reported pair match the untruncated space.
    const auto pts = counterexample_points(n_max + 1, n_max + 2);
    const auto d = counterexample_oracle(pts);
    std::vector<std::size_t> ids(pts.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    std::vector<std::size_t> centers;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].m == 1) centers.push_back(i);
    }
    std::vector<ScalePair> pairs;
    for (int n = 1; n <= n_max; ++n) pairs.push_back({std::ldexp(1.0, -n), std::ldexp(1.0, -n - 1)});
    const auto report = assouad_estimate(ids, d, pairs, centers, c.threads);
    auto out = open_out(c.out);
    io::write_assouad_csv(out, report, [&pts](std::size_t i) {
        return "(" + std::to_string(pts[i].n) + ";" + std::to_string(pts[i].m) + ")";
    });
    const auto probe = doubling_probe(ids, d, 4 * ids.size(), c.seed);
    log << "counterexample points=" << pts.size() << " final_exponent="
        << io::format_real(report.pairs.back().exponent) << " nonconvergent=" << report.nonconvergent
        << " doubling_max=" << probe.max_count << '\n';
}

}  // namespace

void run(const RunConfig& config, std::ostream& log) {
    validate(config);
    switch (config.subcommand) {
        case Subcommand::sample: return cmd_sample(config, log);
        case Subcommand::tree: return cmd_tree(config, log);
        case Subcommand::map: return cmd_map(config, log);
        case Subcommand::stars: return cmd_stars(config, log);
        case Subcommand::assouad: return cmd_assouad(config, log);
        case Subcommand::obstruct: return cmd_obstruct(config, log);
        case Subcommand::example51: return cmd_example51(config, log);
        case Subcommand::counterexample: return cmd_counterexample(config, log);
    }
}

int run_guarded(const RunConfig& config, std::ostream& log, std::ostream& err) {
    try {
        run(config, log);
        return kExitOk;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidArguments;
    } catch (const InvalidProfile& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidArguments;
    } catch (const InputError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace starry
