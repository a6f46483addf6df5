#include "starkres/classical.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <stdexcept>
#include <thread>

namespace starkres {

std::array<double, 4> hamilton_rhs(const HamiltonianParams& params, const PotentialSpec& spec,
                                   const ClassicalState& s) {
    GradHess g = grad_hess(spec, s.x, s.y);
    double u = s.xi + params.B * s.y;
    // grad U already contains the Stark slope: g.ux = 1 + dV/dx
    return {u, s.eta, -g.ux, -params.B * u - (g.uy)};
}

namespace {

using State4 = std::array<double, 4>;

State4 add_scaled(const State4& a, const State4& b, double c) {
    return {a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2], a[3] + c * b[3]};
}

ClassicalState to_state(const State4& v) { return {v[0], v[1], v[2], v[3]}; }

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;

}  // namespace

FlowResult integrate_flow(const HamiltonianParams& params, const PotentialSpec& spec,
                          const ClassicalState& initial, const FlowOptions& opts) {
    // t_max == 0 picks the default horizon; negative integrates backward
    double sgn = opts.t_max < 0.0 ? -1.0 : 1.0;
    double t_max = opts.t_max != 0.0 ? std::abs(opts.t_max) : 50.0 * 2.0 * M_PI / params.B;
    auto f = [&](const State4& v) {
        State4 r = hamilton_rhs(params, spec, to_state(v));
        if (sgn < 0.0)
            for (double& c : r) c = -c;
        return r;
    };

    State4 y{initial.x, initial.y, initial.xi, initial.eta};
    double p0 = eval_symbol(params, spec, initial);

    FlowResult res;
    res.verdict.max_radius = std::hypot(y[0], y[1]);

    double t = 0.0;
    double dt = std::min(1e-2, t_max);
    State4 k1 = f(y);
    bool failed = false, escaped = false;
    double exit_time = 0.0;

    while (t < t_max) {
        dt = std::min(dt, t_max - t);
        State4 s2 = add_scaled(y, k1, dt * A21);
        State4 k2 = f(s2);
        State4 s3 = y;
        for (int i = 0; i < 4; ++i) s3[i] += dt * (A31 * k1[i] + A32 * k2[i]);
        State4 k3 = f(s3);
        State4 s4 = y;
        for (int i = 0; i < 4; ++i) s4[i] += dt * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        State4 k4 = f(s4);
        State4 s5 = y;
        for (int i = 0; i < 4; ++i)
            s5[i] += dt * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        State4 k5 = f(s5);
        State4 s6 = y;
        for (int i = 0; i < 4; ++i)
            s6[i] += dt * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        State4 k6 = f(s6);
        State4 y5 = y;
        for (int i = 0; i < 4; ++i)
            y5[i] += dt * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        State4 k7 = f(y5);

        double err = 0.0;
        for (int i = 0; i < 4; ++i) {
            double e = dt * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                             + E7 * k7[i]);
            double sc = opts.tol * (1.0 + std::max(std::abs(y[i]), std::abs(y5[i])));
            err = std::max(err, std::abs(e) / sc);
        }

        if (err <= 1.0) {
            State4 y_prev = y;
            double t_prev = t;
            t += dt;
            y = y5;
            k1 = k7;  // FSAL
            double r = std::hypot(y[0], y[1]);
            res.verdict.max_radius = std::max(res.verdict.max_radius, r);
            if (r > opts.escape_radius || y[0] < -opts.fast_exit_x) {
                escaped = true;
                // bisect the crossing time inside the accepted step
                auto outside = [&](const State4& s) {
                    return std::hypot(s[0], s[1]) > opts.escape_radius ||
                           s[0] < -opts.fast_exit_x;
                };
                auto rk4_to = [&](const State4& s0, double len) {
                    State4 s = s0;
                    int nsub = 8;
                    double hh = len / nsub;
                    for (int step = 0; step < nsub; ++step) {
                        State4 a1 = f(s);
                        State4 a2 = f(add_scaled(s, a1, 0.5 * hh));
                        State4 a3 = f(add_scaled(s, a2, 0.5 * hh));
                        State4 a4 = f(add_scaled(s, a3, hh));
                        for (int i = 0; i < 4; ++i)
                            s[i] += hh / 6.0 * (a1[i] + 2 * a2[i] + 2 * a3[i] + a4[i]);
                    }
                    return s;
                };
                double lo = 0.0, hi = dt;
                for (int round = 0; round < 30 && hi - lo > 1e-10 * (1.0 + t); ++round) {
                    double mid = 0.5 * (lo + hi);
                    (outside(rk4_to(y_prev, mid)) ? hi : lo) = mid;
                }
                exit_time = t_prev + hi;
                break;
            }
        }
        double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        dt *= std::clamp(fac, 0.2, 5.0);
        if (dt < 1e-14 * (1.0 + std::abs(t))) {
            failed = true;
            break;
        }
    }

    res.final_state = to_state(y);
    res.verdict.status =
        failed ? FlowStatus::Failed : (escaped ? FlowStatus::Escaped : FlowStatus::Trapped);
    res.verdict.exit_time = escaped ? exit_time : t;
    res.verdict.energy_drift = std::abs(eval_symbol(params, spec, res.final_state) - p0);
    return res;
}

namespace {

// Static block partition: identical results for every thread count.
void parallel_blocks(long long n, int threads, const std::function<void(long long, long long)>& body) {
    const long long block = 4096;
    if (threads <= 1 || n <= block) {
        body(0, n);
        return;
    }
    std::vector<std::future<void>> futs;
    std::atomic<long long> next{0};
    int nw = std::min<long long>(threads, (n + block - 1) / block);
    for (int w = 0; w < nw; ++w) {
        futs.push_back(std::async(std::launch::async, [&]() {
            for (;;) {
                long long b = next.fetch_add(1);
                long long lo = b * block;
                if (lo >= n) return;
                body(lo, std::min(n, lo + block));
            }
        }));
    }
    for (auto& f : futs) f.get();
}

}  // namespace

std::vector<SampleVerdict> classify_trapped_grid(const HamiltonianParams& params,
                                                 const PotentialSpec& spec, double a, double b,
                                                 const SamplingPlan& plan,
                                                 const FlowOptions& flow_opts, int threads) {
    if (!(a < b) && a != b) throw std::invalid_argument("classify_trapped_grid: requires a <= b");
    CounterRng rng(plan.seed);
    std::vector<ClassicalState> kept;
    kept.reserve(plan.n_samples);
    for (int i = 0; i < plan.n_samples; ++i) {
        ClassicalState s;
        s.x = rng.uniform(i, 0, plan.lo[0], plan.hi[0]);
        s.y = rng.uniform(i, 1, plan.lo[1], plan.hi[1]);
        s.xi = rng.uniform(i, 2, plan.lo[2], plan.hi[2]);
        s.eta = rng.uniform(i, 3, plan.lo[3], plan.hi[3]);
        double p = eval_symbol(params, spec, s);
        if (p >= a && p <= b) kept.push_back(s);
    }
    std::vector<SampleVerdict> out(kept.size());
    parallel_blocks(static_cast<long long>(kept.size()), threads, [&](long long lo, long long hi) {
        for (long long i = lo; i < hi; ++i) {
            out[i].state = kept[i];
            out[i].energy = eval_symbol(params, spec, kept[i]);
            out[i].verdict = integrate_flow(params, spec, kept[i], flow_opts).verdict;
        }
    });
    return out;
}

VolumeEstimate trapped_volume_closed_form(const PotentialSpec& spec, double a, double b,
                                          const Rectangle& region, int resolution) {
    if (a > b) throw std::invalid_argument("trapped_volume_closed_form: requires a <= b");
    if (resolution < 2) throw std::invalid_argument("trapped_volume_closed_form: resolution < 2");

    // containment check: the {U <= b} well component must not touch the boundary
    for (int i = 0; i <= resolution; ++i) {
        double fx = region.x_min + (region.x_max - region.x_min) * i / resolution;
        double fy = region.y_min + (region.y_max - region.y_min) * i / resolution;
        double edges[4] = {eval_total_potential(spec, fx, region.y_min),
                           eval_total_potential(spec, fx, region.y_max),
                           eval_total_potential(spec, region.x_min, fy),
                           eval_total_potential(spec, region.x_max, fy)};
        for (double u : edges)
            if (u <= b)
                throw std::invalid_argument(
                    "trapped_volume_closed_form: U <= b on the region boundary, "
                    "well region does not contain the sublevel set");
    }

    // midpoint tensor-product rule; integrand is only C^0 at the kinks so a
    // higher-order rule would not pay
    double dx = (region.x_max - region.x_min) / resolution;
    double dy = (region.y_max - region.y_min) / resolution;
    double acc = 0.0;
    for (int j = 0; j < resolution; ++j) {
        double y = region.y_min + (j + 0.5) * dy;
        double row = 0.0;
        for (int i = 0; i < resolution; ++i) {
            double x = region.x_min + (i + 0.5) * dx;
            double u = eval_total_potential(spec, x, y);
            double val = b - std::max(a, u);
            if (val > 0.0) row += val;
        }
        acc += row;
    }
    VolumeEstimate est;
    est.value = 2.0 * M_PI * acc * dx * dy;
    est.method = VolumeMethod::ClosedForm;
    est.sample_count = static_cast<long long>(resolution) * resolution;
    return est;
}

VolumeEstimate trapped_volume_monte_carlo(const PotentialSpec& spec, double a, double b,
                                          const Rectangle& region, const Box4& box,
                                          long long n_samples, std::uint64_t seed, double B,
                                          int threads) {
    VolumeEstimate est;
    est.method = VolumeMethod::MonteCarlo;
    est.sample_count = n_samples;
    est.seed = seed;
    if (n_samples <= 0) {
        est.std_error = std::numeric_limits<double>::infinity();
        return est;
    }
    double box_vol = 1.0;
    for (int d = 0; d < 4; ++d) box_vol *= (box.hi[d] - box.lo[d]);

    CounterRng rng(seed);
    HamiltonianParams params{B, 1.0};
    const long long block = 1 << 16;
    long long n_blocks = (n_samples + block - 1) / block;
    std::vector<long long> hits_per_block(n_blocks, 0);
    parallel_blocks(n_blocks, threads, [&](long long blo, long long bhi) {
        for (long long bi = blo; bi < bhi; ++bi) {
            long long lo = bi * block, hi = std::min(n_samples, lo + block);
            long long hits = 0;
            for (long long i = lo; i < hi; ++i) {
                ClassicalState s;
                s.x = rng.uniform(i, 0, box.lo[0], box.hi[0]);
                s.y = rng.uniform(i, 1, box.lo[1], box.hi[1]);
                s.xi = rng.uniform(i, 2, box.lo[2], box.hi[2]);
                s.eta = rng.uniform(i, 3, box.lo[3], box.hi[3]);
                if (s.x < region.x_min || s.x > region.x_max || s.y < region.y_min ||
                    s.y > region.y_max)
                    continue;
                double p = eval_symbol(params, spec, s);
                if (p >= a && p <= b) ++hits;
            }
            hits_per_block[bi] = hits;
        }
    });
    long long hits = 0;
    for (long long c : hits_per_block) hits += c;  // fixed order, thread-count independent
    double frac = static_cast<double>(hits) / static_cast<double>(n_samples);
    est.value = box_vol * frac;
    est.std_error = box_vol * std::sqrt(frac * (1.0 - frac) / static_cast<double>(n_samples));
    return est;
}

}  // namespace starkres
