#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "pglayout/engine.hpp"
#include "pglayout/gfa.hpp"
#include "pglayout/layout_io.hpp"
#include "pglayout/metrics.hpp"
#include "pglayout/svg.hpp"
#include "pglayout/synthetic.hpp"

namespace {

using namespace pglayout;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

int exit_code_for(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::usage: return kExitUsage;
    case ErrorKind::input: return kExitInput;
    case ErrorKind::internal: return kExitRuntime;
    }
    return kExitRuntime;
}

std::uint32_t auto_threads() {
    if (const char* env = std::getenv("PGLAYOUT_THREADS")) {
        std::uint32_t v = 0;
        const auto* end = env + std::string_view(env).size();
        const auto [ptr, ec] = std::from_chars(env, end, v);
        if (ec != std::errc{} || ptr != end || v < 1)
            throw InvalidParameter(std::string("PGLAYOUT_THREADS='") + env +
                                   "' is not a positive integer");
        return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

PangenomeGraph load_gfa(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw MalformedLine("cannot open GFA file '" + path + "'");
    GfaParseStats stats;
    PangenomeGraph g = parse_gfa(in, &stats);
    if (stats.skipped_records > 0)
        std::cerr << "warning: skipped " << stats.skipped_records
                  << " unsupported GFA record(s) in " << path << "\n";
    return g;
}

Layout load_layout(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw MalformedRow("cannot open layout file '" + path + "'");
    return read_layout_tsv(in);
}

// All output files go through a temp-file-plus-rename so a failed run never
// leaves a truncated artifact behind.
void write_file_atomic(const std::string& path,
                       const std::function<void(std::ostream&)>& writer) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp(target);
    tmp += ".tmp-" + std::to_string(static_cast<long>(::getpid()));
    try {
        std::ofstream out(tmp, std::ios::binary);
        if (!out)
            throw MalformedRow("cannot open output file '" + tmp.string() + "'");
        writer(out);
        out.flush();
        if (!out)
            throw MalformedRow("write to '" + tmp.string() + "' failed");
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ec2;
        fs::remove(tmp, ec2);
        throw MalformedRow("cannot move output into place at '" + path +
                           "': " + ec.message());
    }
}

struct LayoutArgs {
    std::string gfa;
    std::string out;
    LayoutConfig cfg;
    std::uint32_t threads = 0; // 0 = auto
    std::uint32_t checkpoint_every = 0;
};

int cmd_layout(const LayoutArgs& args) {
    PangenomeGraph g = load_gfa(args.gfa);
    LayoutConfig cfg = args.cfg;
    cfg.threads = args.threads == 0 ? auto_threads() : args.threads;
    std::cerr << "layout: " << g.node_count() << " nodes, " << g.paths.size()
              << " paths, " << g.total_steps() << " steps, threads="
              << cfg.threads << "\n";

    const auto progress = [&](std::uint32_t iter, const Layout& layout,
                              double eta, double secs) {
        std::fprintf(stderr, "iter %u/%u eta %.6g %.3fs\n", iter + 1,
                     cfg.n_iters, eta, secs);
        if (args.checkpoint_every > 0 && (iter + 1) % args.checkpoint_every == 0) {
            const std::string path =
                args.out + ".ckpt-" + std::to_string(iter + 1) + ".tsv";
            write_file_atomic(
                path, [&](std::ostream& out) { write_layout_tsv(layout, out); });
        }
    };

    const Layout layout = cfg.drf > 1 ? run_layout_reuse(g, cfg, progress)
                                      : run_layout(g, cfg, progress);
    write_file_atomic(args.out,
                      [&](std::ostream& out) { write_layout_tsv(layout, out); });
    return kExitOk;
}

struct StressArgs {
    std::string gfa;
    std::string layout;
    bool exact = false;
    bool sampled = false;
    std::uint32_t samples_per_node = 100;
    std::uint64_t seed = 42;
    bool force = false;
};

int cmd_stress(const StressArgs& args) {
    if (args.exact == args.sampled)
        throw InvalidParameter("pick exactly one of --exact / --sampled");
    PangenomeGraph g = load_gfa(args.gfa);
    Layout layout = load_layout(args.layout);
    if (layout.node_count() != g.node_count())
        throw CountMismatch("layout has " + std::to_string(layout.node_count()) +
                            " rows but the graph has " +
                            std::to_string(g.node_count()) + " nodes");
    constexpr std::uint64_t kExactGuard = 100000;
    if (args.exact && g.total_steps() > kExactGuard && !args.force)
        throw InvalidParameter(
            "graph has " + std::to_string(g.total_steps()) +
            " steps; exact stress is quadratic and would take very long. Use "
            "--sampled, or --force to proceed anyway");
    const StressReport rep =
        args.exact
            ? exact_path_stress(g, layout)
            : sampled_path_stress(g, layout, args.seed, args.samples_per_node);
    std::cout << report_tsv(rep) << "\n";
    return kExitOk;
}

struct RenderArgs {
    std::string gfa;
    std::string layout;
    std::string out;
    RenderOptions opts;
};

int cmd_render(const RenderArgs& args) {
    PangenomeGraph g = load_gfa(args.gfa);
    Layout layout = load_layout(args.layout);
    const std::string svg = render_svg(g, layout, args.opts);
    write_file_atomic(args.out, [&](std::ostream& out) { out << svg; });
    return kExitOk;
}

struct GenArgs {
    std::string out;
    std::uint64_t seed = 42;
    std::uint64_t backbone = 1000;
    std::uint32_t paths = 4;
    double variant_rate = 0.05;
};

int cmd_gen(const GenArgs& args) {
    const PangenomeGraph g = generate_synthetic_pangenome(
        args.seed, args.backbone, args.paths, args.variant_rate);
    write_file_atomic(args.out, [&](std::ostream& out) { write_gfa(g, out); });
    std::fprintf(stderr,
                 "gen: %zu nodes, %zu edges, %llu steps, avg degree %.3f\n",
                 g.node_count(), g.edges.size(),
                 static_cast<unsigned long long>(g.total_steps()),
                 g.average_degree());
    return kExitOk;
}

struct BenchArgs {
    std::string gfa;
    std::vector<std::uint32_t> threads_list{1, 2, 4, 8};
    std::uint32_t repeats = 3;
    std::uint32_t n_iters = 30;
    std::uint64_t seed = 42;
};

int cmd_bench(const BenchArgs& args) {
    if (args.repeats < 1) throw InvalidParameter("repeats must be >= 1");
    if (args.threads_list.empty())
        throw InvalidParameter("threads list must not be empty");
    PangenomeGraph g = load_gfa(args.gfa);
    std::cout << "threads\tmedian_seconds\tsps\n";
    for (std::uint32_t t : args.threads_list) {
        if (t < 1) throw InvalidParameter("thread counts must be >= 1");
        LayoutConfig cfg;
        cfg.global_seed = args.seed;
        cfg.n_iters = args.n_iters;
        cfg.threads = t;
        std::vector<double> secs;
        double sps = 0.0;
        for (std::uint32_t r = 0; r < args.repeats; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            const Layout layout = run_layout(g, cfg);
            secs.push_back(std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - t0)
                               .count());
            if (r + 1 == args.repeats)
                sps = sampled_path_stress(g, layout, args.seed).mean;
        }
        std::sort(secs.begin(), secs.end());
        const double median = secs[secs.size() / 2];
        std::fprintf(stderr, "bench: threads=%u median=%.3fs sps=%.6g\n", t,
                     median, sps);
        std::printf("%u\t%.6f\t%.9g\n", t, median, sps);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pangenome graph layout: path-guided SGD, stress metrics, "
                 "rendering"};
    app.require_subcommand(1);

    LayoutArgs la;
    CLI::App* layout_cmd =
        app.add_subcommand("layout", "compute a 2D layout for a GFA graph");
    layout_cmd->add_option("gfa", la.gfa, "input GFA file")->required();
    layout_cmd->add_option("-o,--out", la.out, "output layout TSV")->required();
    layout_cmd->add_option("--iters", la.cfg.n_iters, "SGD iterations");
    layout_cmd->add_option("--seed", la.cfg.global_seed, "random seed");
    layout_cmd->add_option("--threads", la.threads,
                           "worker threads (0 = auto, honours PGLAYOUT_THREADS)");
    layout_cmd->add_option("--batch", la.cfg.batch_size,
                           "steps sharing one cooling decision");
    layout_cmd->add_option("--zipf-theta", la.cfg.zipf_theta,
                           "hop-distance power-law exponent");
    layout_cmd->add_option("--zipf-space-max", la.cfg.zipf_space_max,
                           "hop-distance window cap");
    layout_cmd->add_option("--eta-min-eps", la.cfg.eta_min_eps,
                           "final learning-rate epsilon");
    layout_cmd->add_option("--drf", la.cfg.drf,
                           "updates per selected pair (1, 2 or 4)");
    layout_cmd->add_option("--srf", la.cfg.srf, "step budget divisor");
    layout_cmd->add_option("--checkpoint-every", la.checkpoint_every,
                           "dump the layout every K iterations");

    StressArgs sa;
    CLI::App* stress_cmd =
        app.add_subcommand("stress", "path stress of a layout");
    stress_cmd->add_option("gfa", sa.gfa, "input GFA file")->required();
    stress_cmd->add_option("layout", sa.layout, "layout TSV")->required();
    stress_cmd->add_flag("--exact", sa.exact, "enumerate every step pair");
    stress_cmd->add_flag("--sampled", sa.sampled, "Monte Carlo estimate");
    stress_cmd->add_option("--samples-per-node", sa.samples_per_node,
                           "samples per path step");
    stress_cmd->add_option("--seed", sa.seed, "sampling seed");
    stress_cmd->add_flag("--force", sa.force,
                         "allow --exact on very large graphs");

    RenderArgs ra;
    CLI::App* render_cmd = app.add_subcommand("render", "draw a layout as SVG");
    render_cmd->add_option("gfa", ra.gfa, "input GFA file")->required();
    render_cmd->add_option("layout", ra.layout, "layout TSV")->required();
    render_cmd->add_option("-o,--out", ra.out, "output SVG file")->required();
    render_cmd->add_option("--width", ra.opts.width_px, "image width in px");
    render_cmd->add_option("--stroke-scale", ra.opts.stroke_scale,
                           "node stroke width as a multiple of the median "
                           "segment length");
    render_cmd->add_flag("--color-by-path", ra.opts.color_by_path,
                         "overlay one colored polyline per path");

    GenArgs ga;
    CLI::App* gen_cmd =
        app.add_subcommand("gen", "generate a synthetic pangenome GFA");
    gen_cmd->add_option("-o,--out", ga.out, "output GFA file")->required();
    gen_cmd->add_option("--seed", ga.seed, "random seed");
    gen_cmd->add_option("--backbone", ga.backbone, "backbone node count");
    gen_cmd->add_option("--paths", ga.paths, "number of paths");
    gen_cmd->add_option("--variant-rate", ga.variant_rate,
                        "bubble rate per backbone position");

    BenchArgs ba;
    CLI::App* bench_cmd =
        app.add_subcommand("bench", "time layout runs across thread counts");
    bench_cmd->add_option("gfa", ba.gfa, "input GFA file")->required();
    bench_cmd->add_option("--threads-list", ba.threads_list,
                          "thread counts to measure")
        ->delimiter(',');
    bench_cmd->add_option("--repeats", ba.repeats, "runs per thread count");
    bench_cmd->add_option("--iters", ba.n_iters, "SGD iterations per run");
    bench_cmd->add_option("--seed", ba.seed, "layout seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (layout_cmd->parsed()) return cmd_layout(la);
        if (stress_cmd->parsed()) return cmd_stress(sa);
        if (render_cmd->parsed()) return cmd_render(ra);
        if (gen_cmd->parsed()) return cmd_gen(ga);
        if (bench_cmd->parsed()) return cmd_bench(ba);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
