#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "starry/pipeline.hpp"

int main(int argc, char** argv) {
    starry::RunConfig cfg;
    CLI::App app{"Continuum-tree and Brownian-map star certificates and Assouad estimates"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", cfg.seed, "random seed")->default_val(0);
    app.add_option("--grid", cfg.grid_n, "grid cells (power of two >= 16)")->default_val(65536);
    app.add_option("--out", cfg.out, "output path");
    app.add_option("--threads", cfg.threads, "worker threads")->default_val(1);

    auto* sample = app.add_subcommand("sample", "sample an excursion to CSV");
    sample->add_option("--kind", cfg.kind, "brownian | zigzag:<n> | example51")->default_val("brownian");
    sample->add_option("--plot", cfg.plot, "SVG output path");

    auto* tree = app.add_subcommand("tree", "leaves and pairwise tree distances");
    tree->add_option("--in", cfg.in, "excursion CSV")->required();
    tree->add_option("--leaves", cfg.leaves, "leaf CSV output path");
    tree->add_option("--points", cfg.points, "max points in the distance table")->default_val(256);

    auto* map = app.add_subcommand("map", "labels, D-circ and chain-closed map distances");
    map->add_option("--in", cfg.in, "excursion CSV")->required();
    map->add_option("--subset", cfg.subset_m, "chain points m")->default_val(512);
    map->add_option("--strategy", cfg.strategy, "stride | extremes")->default_val("extremes");

    auto* stars = app.add_subcommand("stars", "scan zig-zag windows and certify stars");
    stars->add_option("--in", cfg.in, "excursion CSV")->required();
    stars->add_option("--n-min", cfg.n_min, "smallest zig-zag order")->default_val(6);
    stars->add_option("--n-max", cfg.n_max, "largest zig-zag order")->default_val(10);
    stars->add_option("--metric", cfg.metric, "tree | map")->default_val("tree");
    stars->add_option("--subset", cfg.subset_m, "chain points for --metric map")->default_val(512);
    stars->add_option("--plot", cfg.plot, "SVG output path");

    auto* assouad = app.add_subcommand("assouad", "covering-number Assouad estimate");
    assouad->add_option("--in", cfg.in, "excursion CSV (t,f) or coordinate CSV")->required();
    assouad->add_option("--points", cfg.points, "subsample size for excursions")->default_val(256);

    auto* obstruct = app.add_subcommand("obstruct", "quasisymmetric obstruction verdict from a star");
    obstruct->add_option("--star", cfg.star, "star JSON")->required();
    obstruct->add_option("--psi", cfg.psi, "linear | power:<p> | table:t=v,...")->default_val("linear");
    obstruct->add_option("--C", cfg.C, "Assouad constant")->default_val(1.0);
    obstruct->add_option("--s", cfg.s, "Assouad exponent")->default_val(2.0);

    auto* ex51 = app.add_subcommand("example51", "low-dimensional excursion with a starry tree");
    ex51->add_option("--terms", cfg.series_terms, "series truncation")->default_val(20);
    ex51->add_option("--stars", cfg.star, "star JSON output path");
    ex51->add_option("--plot", cfg.plot, "SVG output path");

    auto* counter = app.add_subcommand("counterexample", "countable non-starry space sweep");
    counter->add_option("--nmax", cfg.counter_n_max, "truncation")->default_val(24);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : starry::kExitInvalidArguments;
    }
    try {
        cfg.subcommand = starry::parse_subcommand(app.get_subcommands().front()->get_name());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return starry::kExitInvalidArguments;
    }
    return starry::run_guarded(cfg, std::cout, std::cerr);
}
