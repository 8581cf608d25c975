#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "pglayout/engine.hpp"
#include "pglayout/metrics.hpp"
#include "pglayout/synthetic.hpp"
#include "support/test_support.hpp"

using namespace pglayout;

namespace {

PangenomeGraph two_node_graph() {
    return build_graph({5, 3}, {{0, Endpoint::end, 1, Endpoint::start}},
                       {{"p", {{0, Orientation::forward},
                               {1, Orientation::forward}}}});
}

// Central finite difference of pair_stress with respect to v_i.
Vec2 fd_grad_vi(Vec2 vi, Vec2 vj, double d_ref) {
    const double h = 1e-5 * std::max(1.0, (vi - vj).norm());
    const double gx = (pair_stress({vi.x + h, vi.y}, vj, d_ref) -
                       pair_stress({vi.x - h, vi.y}, vj, d_ref)) /
                      (2 * h);
    const double gy = (pair_stress({vi.x, vi.y + h}, vj, d_ref) -
                       pair_stress({vi.x, vi.y - h}, vj, d_ref)) /
                      (2 * h);
    return {gx, gy};
}

} // namespace

TEST_CASE("make_eta_schedule interpolates geometrically") {
    const SgdSchedule two = make_eta_schedule(100.0, 1.0, 2);
    REQUIRE(two.etas.size() == 2);
    CHECK(two.etas[0] == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(two.etas[1] == doctest::Approx(1.0).epsilon(1e-12));

    const SgdSchedule three = make_eta_schedule(100.0, 1.0, 3);
    REQUIRE(three.etas.size() == 3);
    CHECK(three.etas[1] == doctest::Approx(10.0).epsilon(1e-12));

    const SgdSchedule one = make_eta_schedule(100.0, 1.0, 1);
    REQUIRE(one.etas.size() == 1);
    CHECK(one.etas[0] == 100.0);
    CHECK(one.lambda == 0.0);

    const SgdSchedule full = make_eta_schedule(4096.0, 0.01, 30);
    for (std::uint32_t t = 0; t < 30; ++t) {
        const double closed =
            4096.0 * std::pow(0.01 / 4096.0, static_cast<double>(t) / 29.0);
        CHECK(full.etas[t] == doctest::Approx(closed).epsilon(1e-12));
        if (t) CHECK(full.etas[t] < full.etas[t - 1]);
    }

    CHECK_THROWS_AS(make_eta_schedule(1.0, 2.0, 5), InvalidParameter);
    CHECK_THROWS_AS(make_eta_schedule(-1.0, -2.0, 5), InvalidParameter);
    CHECK_THROWS_AS(make_eta_schedule(1.0, 0.5, 0), InvalidParameter);
}

TEST_CASE("make_schedule derives the eta range from the longest path") {
    const PangenomeGraph g = two_node_graph(); // one path of 8 nucleotides
    LayoutConfig cfg;
    cfg.n_iters = 10;
    const SgdSchedule s = make_schedule(g, cfg);
    CHECK(s.eta_max == doctest::Approx(64.0).epsilon(1e-9));
    CHECK(s.eta_min == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(s.etas.front() == doctest::Approx(64.0).epsilon(1e-9));
    CHECK(s.etas.back() == doctest::Approx(0.01).epsilon(1e-9));

    const PangenomeGraph single_steps =
        build_graph({5}, {}, {{"p", {{0, Orientation::forward}}}});
    CHECK_THROWS_AS(make_schedule(single_steps, cfg), DegenerateGraph);
}

TEST_CASE("init_layout unrolls x by cumulative offset and bounds y noise") {
    const PangenomeGraph g = two_node_graph();
    const Layout a = init_layout(g, 42);
    CHECK(a.get(0, Endpoint::start).x == 0.0);
    CHECK(a.get(0, Endpoint::end).x == 5.0);
    CHECK(a.get(1, Endpoint::start).x == 5.0);
    CHECK(a.get(1, Endpoint::end).x == 8.0);
    const double amp = std::sqrt(8.0);
    for (NodeId n = 0; n < 2; ++n)
        for (Endpoint e : {Endpoint::start, Endpoint::end}) {
            CHECK(std::abs(a.get(n, e).y) <= amp);
        }
    const Layout b = init_layout(g, 42);
    CHECK(a.snapshot() == b.snapshot());
    const Layout c = init_layout(g, 43);
    CHECK(a.snapshot() != c.snapshot());
    CHECK(a.get(0, Endpoint::start).x == c.get(0, Endpoint::start).x);
}

TEST_CASE("apply_endpoint_update at saturated step lands the pair on d_ref") {
    // Endpoints at (0,0) and (0,10), reference distance 5, eta large enough
    // that mu saturates: each side gives up half the excess, meeting at
    // (0, 2.5) and (0, 7.5).
    Layout layout(2);
    layout.set(0, Endpoint::start, {0.0, 0.0});
    layout.set(1, Endpoint::start, {0.0, 10.0});
    RngState rng = seed_worker(1, 0);
    const StepOutcome out = apply_endpoint_update(
        layout, 0, Endpoint::start, 1, Endpoint::start, 5.0, 1e6, rng);
    CHECK(out == StepOutcome::applied);
    CHECK(layout.get(0, Endpoint::start).x == doctest::Approx(0.0));
    CHECK(layout.get(0, Endpoint::start).y == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(layout.get(1, Endpoint::start).y == doctest::Approx(7.5).epsilon(1e-12));
}

TEST_CASE("saturated updates contract any pair exactly to d_ref") {
    RngState rng = seed_worker(2, 0);
    for (int trial = 0; trial < 100; ++trial) {
        Layout layout(2);
        const Vec2 vi{200 * rng.next_uniform() - 100, 200 * rng.next_uniform() - 100};
        const Vec2 vj{200 * rng.next_uniform() - 100, 200 * rng.next_uniform() - 100};
        layout.set(0, Endpoint::end, vi);
        layout.set(1, Endpoint::end, vj);
        const double d_ref = 0.5 + 49.5 * rng.next_uniform();
        apply_endpoint_update(layout, 0, Endpoint::end, 1, Endpoint::end, d_ref,
                              2.0 * d_ref * d_ref, rng); // mu = min(2, 1) = 1
        const double dist = (layout.get(0, Endpoint::end) -
                             layout.get(1, Endpoint::end)).norm();
        CHECK(std::abs(dist - d_ref) <= 1e-9 * d_ref);
    }
}

TEST_CASE("updates displace both endpoints symmetrically") {
    RngState rng = seed_worker(3, 0);
    for (int trial = 0; trial < 100; ++trial) {
        Layout layout(2);
        const Vec2 vi{100 * rng.next_uniform(), 100 * rng.next_uniform()};
        const Vec2 vj{100 * rng.next_uniform(), 100 * rng.next_uniform()};
        layout.set(0, Endpoint::start, vi);
        layout.set(1, Endpoint::start, vj);
        const double d_ref = 1.0 + 20.0 * rng.next_uniform();
        apply_endpoint_update(layout, 0, Endpoint::start, 1, Endpoint::start,
                              d_ref, 0.3 * d_ref * d_ref, rng);
        const Vec2 di = layout.get(0, Endpoint::start) - vi;
        const Vec2 dj = layout.get(1, Endpoint::start) - vj;
        const double scale = std::max({std::abs(vi.x), std::abs(vi.y),
                                       std::abs(vj.x), std::abs(vj.y), 1.0});
        CHECK(std::abs(di.x + dj.x) <= 1e-12 * scale);
        CHECK(std::abs(di.y + dj.y) <= 1e-12 * scale);
    }
}

TEST_CASE("update direction and size follow the stress gradient") {
    // For the relative-error stress of one pair, the applied move of each
    // endpoint equals -(eta / 4) times the stress gradient at that endpoint
    // whenever mu stays below 1.
    RngState rng = seed_worker(4, 0);
    int checked = 0;
    while (checked < 100) {
        const Vec2 vi{200 * rng.next_uniform() - 100, 200 * rng.next_uniform() - 100};
        const Vec2 vj{200 * rng.next_uniform() - 100, 200 * rng.next_uniform() - 100};
        const double mag = (vi - vj).norm();
        if (mag < 1.0) continue;
        const double d_ref = 0.5 + 49.5 * rng.next_uniform();
        if (std::abs(mag - d_ref) < 0.1 * d_ref) continue; // keep the move well-sized
        const double mu_target = 0.05 + 0.85 * rng.next_uniform();
        const double eta = mu_target * d_ref * d_ref;

        Layout layout(2);
        layout.set(0, Endpoint::end, vi);
        layout.set(1, Endpoint::end, vj);
        apply_endpoint_update(layout, 0, Endpoint::end, 1, Endpoint::end, d_ref,
                              eta, rng);
        const Vec2 moved = layout.get(0, Endpoint::end) - vi;
        const Vec2 grad = fd_grad_vi(vi, vj, d_ref);
        const Vec2 expected = (-eta / 4.0) * grad;
        const double err = (moved - expected).norm();
        REQUIRE(expected.norm() > 0.0);
        CHECK(err <= 1e-6 * expected.norm());
        ++checked;
    }
}

TEST_CASE("coincident endpoints separate to d_ref in a random direction") {
    RngState rng = seed_worker(5, 0);
    Layout layout(2);
    layout.set(0, Endpoint::start, {3.0, 7.0});
    layout.set(1, Endpoint::start, {3.0, 7.0});
    const StepOutcome out = apply_endpoint_update(
        layout, 0, Endpoint::start, 1, Endpoint::start, 4.0, 1e9, rng);
    CHECK(out == StepOutcome::applied);
    const Vec2 a = layout.get(0, Endpoint::start);
    const Vec2 b = layout.get(1, Endpoint::start);
    CHECK((a - b).norm() == doctest::Approx(4.0).epsilon(1e-9));
    CHECK((a - Vec2{3.0, 7.0}).norm() > 1.0); // both sides moved
    CHECK((b - Vec2{3.0, 7.0}).norm() > 1.0);
    CHECK(0.5 * (a.x + b.x) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(0.5 * (a.y + b.y) == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("zero reference distance is skipped without touching the layout") {
    Layout layout(2);
    layout.set(0, Endpoint::start, {1.0, 2.0});
    layout.set(1, Endpoint::start, {3.0, 4.0});
    RngState rng = seed_worker(6, 0);
    const auto before = layout.snapshot();
    CHECK(apply_endpoint_update(layout, 0, Endpoint::start, 1, Endpoint::start,
                                0.0, 10.0, rng) == StepOutcome::skipped);
    CHECK(layout.snapshot() == before);
}

TEST_CASE("layout_step outcome frequencies match the selection rules") {
    // Two abutting steps of length 5: endpoint combinations collide at the
    // shared position with probability 1/4. The uniform branch additionally
    // abandons 1/4 of its draws (two collisions on a two-step path), so
    // P(applied) = 3/4 * 3/4 = 9/16 without cooling and 3/4 with it.
    const PangenomeGraph g =
        build_graph({5, 5}, {}, {{"p", {{0, Orientation::forward},
                                        {1, Orientation::forward}}}});
    LayoutConfig cfg;
    Layout layout = init_layout(g, 9);
    RngState rng = seed_worker(9, 0);

    const int n = 20000;
    int applied_uniform = 0, applied_cooling = 0;
    for (int s = 0; s < n; ++s) {
        const auto before = layout.snapshot();
        const StepOutcome out = layout_step(g, layout, rng, 1e-3, false, cfg);
        if (out == StepOutcome::applied) {
            ++applied_uniform;
            CHECK(layout.snapshot() != before);
        } else {
            CHECK(layout.snapshot() == before);
        }
    }
    for (int s = 0; s < n; ++s) {
        if (layout_step(g, layout, rng, 1e-3, true, cfg) == StepOutcome::applied)
            ++applied_cooling;
    }
    CHECK(std::abs(applied_uniform / static_cast<double>(n) - 9.0 / 16.0) <= 0.02);
    CHECK(std::abs(applied_cooling / static_cast<double>(n) - 3.0 / 4.0) <= 0.02);
}

TEST_CASE("run_layout is reproducible with one thread") {
    const PangenomeGraph g = generate_synthetic_pangenome(11, 60, 2, 0.1);
    LayoutConfig cfg;
    cfg.n_iters = 4;
    cfg.global_seed = 77;
    const Layout a = run_layout(g, cfg);
    const Layout b = run_layout(g, cfg);
    CHECK(a.snapshot() == b.snapshot());
    CHECK(a.all_finite());

    cfg.global_seed = 78;
    const Layout c = run_layout(g, cfg);
    CHECK(a.snapshot() != c.snapshot());
}

TEST_CASE("run_layout accounts for every scheduled update") {
    const PangenomeGraph g = generate_synthetic_pangenome(12, 50, 2, 0.1);
    const std::uint64_t budget = total_update_steps(g);

    for (const auto& [drf, srf] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
             {1u, 1u}, {1u, 2u}, {2u, 2u}, {4u, 4u}, {2u, 1u}}) {
        LayoutConfig cfg;
        cfg.n_iters = 3;
        cfg.drf = drf;
        cfg.srf = srf;
        RunStats stats;
        if (drf == 1)
            run_layout(g, cfg, {}, &stats);
        else
            run_layout_reuse(g, cfg, {}, &stats);
        CHECK(stats.primary_steps == cfg.n_iters * (budget / srf));
        CHECK(stats.updates_attempted == stats.primary_steps * drf);
        CHECK(stats.updates_applied + stats.updates_skipped ==
              stats.updates_attempted);
        CHECK(stats.updates_applied > 0);
    }
}

TEST_CASE("first-half batches cool on a fair coin, second half always") {
    const PangenomeGraph g = generate_synthetic_pangenome(13, 500, 2, 0.0);
    LayoutConfig cfg;
    cfg.n_iters = 30;
    cfg.batch_size = 1; // one cooling decision per step
    RunStats stats;
    run_layout(g, cfg, {}, &stats);

    const std::uint64_t steps_per_iter = total_update_steps(g);
    CHECK(stats.batches_first_half == 15 * steps_per_iter);
    CHECK(stats.batches_second_half == 15 * steps_per_iter);
    CHECK(stats.batches_second_half_cooling == stats.batches_second_half);
    const double frac = static_cast<double>(stats.batches_first_half_cooling) /
                        static_cast<double>(stats.batches_first_half);
    CHECK(std::abs(frac - 0.5) <= 0.01);
}

TEST_CASE("cooling switch point sits at the schedule midpoint") {
    const PangenomeGraph g = generate_synthetic_pangenome(14, 40, 1, 0.0);
    const std::uint64_t spi = total_update_steps(g);
    for (std::uint32_t n_iters : {1u, 2u, 3u}) {
        LayoutConfig cfg;
        cfg.n_iters = n_iters;
        cfg.batch_size = 1;
        RunStats stats;
        run_layout(g, cfg, {}, &stats);
        // Forced cooling covers iterations with 2 * iter >= n_iters: the last
        // floor(n_iters / 2) of them.
        const std::uint64_t expect_second = (n_iters / 2) * spi;
        CHECK(stats.batches_second_half == expect_second);
        CHECK(stats.batches_first_half == n_iters * spi - expect_second);
    }
}

TEST_CASE("iteration callback sees every iteration with its eta") {
    const PangenomeGraph g = generate_synthetic_pangenome(15, 40, 1, 0.0);
    LayoutConfig cfg;
    cfg.n_iters = 6;
    const SgdSchedule schedule = make_schedule(g, cfg);
    std::vector<std::uint32_t> iters;
    std::vector<double> etas;
    run_layout(g, cfg, [&](std::uint32_t iter, const Layout& layout, double eta,
                           double seconds) {
        iters.push_back(iter);
        etas.push_back(eta);
        CHECK(layout.all_finite());
        CHECK(seconds >= 0.0);
    });
    REQUIRE(iters.size() == 6);
    for (std::uint32_t t = 0; t < 6; ++t) {
        CHECK(iters[t] == t);
        CHECK(etas[t] == schedule.etas[t]);
    }
}

TEST_CASE("stress falls monotonically along the schedule") {
    const PangenomeGraph g = generate_synthetic_pangenome(3, 400, 3, 0.05);
    LayoutConfig cfg;
    cfg.global_seed = 21;
    std::vector<double> sps;
    sps.push_back(sampled_path_stress(g, init_layout(g, cfg.global_seed), 5).mean);
    run_layout(g, cfg, [&](std::uint32_t iter, const Layout& layout, double,
                           double) {
        if (iter == 0 || iter == 7 || iter == 14 || iter == cfg.n_iters - 1)
            sps.push_back(sampled_path_stress(g, layout, 5).mean);
    });
    REQUIRE(sps.size() == 5);
    for (std::size_t k = 0; k + 1 < sps.size(); ++k)
        CHECK(sps[k + 1] <= sps[k] * 1.10); // monotone up to sampling noise
    CHECK(sps.back() < sps.front() / 10.0);
}

TEST_CASE("multithreaded runs stay finite and converge") {
    const PangenomeGraph g = generate_synthetic_pangenome(3, 400, 3, 0.05);
    LayoutConfig cfg;
    cfg.threads = 4;
    RunStats stats;
    const Layout out = run_layout(g, cfg, {}, &stats);
    CHECK(out.all_finite());
    CHECK(stats.primary_steps == cfg.n_iters * total_update_steps(g));
    const double init_sps =
        sampled_path_stress(g, init_layout(g, cfg.global_seed), 5).mean;
    CHECK(sampled_path_stress(g, out, 5).mean < init_sps / 10.0);
}

TEST_CASE("paths too short to pair are tolerated but contribute skips") {
    const PangenomeGraph g = build_graph(
        {2, 2, 2}, {},
        {{"solo", {{0, Orientation::forward}}},
         {"pair", {{1, Orientation::forward}, {2, Orientation::forward}}}});
    LayoutConfig cfg;
    cfg.n_iters = 2;
    RunStats stats;
    const Layout out = run_layout(g, cfg, {}, &stats);
    CHECK(out.all_finite());
    CHECK(stats.updates_skipped > 0);
    CHECK(stats.updates_applied > 0);
}

TEST_CASE("run_layout validates graph and config") {
    const PangenomeGraph no_pairs =
        build_graph({5}, {}, {{"p", {{0, Orientation::forward}}}});
    LayoutConfig cfg;
    CHECK_THROWS_AS(run_layout(no_pairs, cfg), DegenerateGraph);

    const PangenomeGraph no_paths = build_graph({5}, {}, {});
    CHECK_THROWS_AS(run_layout(no_paths, cfg), DegenerateGraph);

    const PangenomeGraph g = two_node_graph();
    LayoutConfig bad;
    bad.drf = 3;
    CHECK_THROWS_AS(run_layout(g, bad), InvalidParameter);
    bad = {};
    bad.threads = 0;
    CHECK_THROWS_AS(run_layout(g, bad), InvalidParameter);
    bad = {};
    bad.batch_size = 0;
    CHECK_THROWS_AS(run_layout(g, bad), InvalidParameter);
    bad = {};
    bad.n_iters = 0;
    CHECK_THROWS_AS(run_layout(g, bad), InvalidParameter);
    bad = {};
    bad.zipf_theta = 0.0;
    CHECK_THROWS_AS(run_layout(g, bad), InvalidParameter);
    bad = {};
    bad.zipf_space_max = 0;
    CHECK_THROWS_AS(run_layout(g, bad), InvalidParameter);
    bad = {};
    bad.eta_min_eps = 0.0;
    CHECK_THROWS_AS(run_layout(g, bad), InvalidParameter);
    bad = {};
    bad.srf = 0;
    CHECK_THROWS_AS(run_layout(g, bad), InvalidParameter);

    // The reuse entry point insists on an actual reuse factor.
    LayoutConfig reuse;
    reuse.drf = 1;
    CHECK_THROWS_AS(run_layout_reuse(g, reuse), InvalidParameter);
    reuse.drf = 3;
    CHECK_THROWS_AS(run_layout_reuse(g, reuse), InvalidParameter);
}
