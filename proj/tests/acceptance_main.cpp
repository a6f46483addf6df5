// Acceptance suite: runs every configured criterion and prints one
// PASS/FAIL line per criterion.  Exit code 0 only when all pass.
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "starkres/dense_eig.hpp"
#include "starkres/experiments.hpp"
#include "starkres/matching.hpp"

using namespace starkres;

namespace {

struct Criterion {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<Criterion> g_results;

void record(const std::string& name, bool pass, const std::string& detail) {
    g_results.push_back({name, pass, detail});
    std::printf("[%s] %-52s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. alpha-formula reproduction
void criterion_alpha() {
    CounterRng rng(20240901);
    double worst_prod = 0.0, worst_sum = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double B = rng.uniform(i, 0, 0.0, 4.0);
        double l1 = rng.uniform(i, 1, 0.05, 5.0);
        double l2 = rng.uniform(i, 2, 0.05, 5.0);
        double a1, a2;
        harmonic_frequencies(B, l1, l2, a1, a2);
        worst_prod = std::max(worst_prod,
                              std::abs(a1 * a2 - std::sqrt(l1 * l2)) / std::sqrt(l1 * l2));
        double s = B * B + l1 + l2;
        worst_sum = std::max(worst_sum, std::abs(a1 * a1 + a2 * a2 - s) / s);
    }
    double wb0 = 0.0;
    for (int i = 0; i < 200; ++i) {
        double l1 = rng.uniform(5000 + i, 0, 0.05, 5.0);
        double l2 = rng.uniform(5000 + i, 1, 0.05, 5.0);
        double a1, a2;
        harmonic_frequencies(0.0, l1, l2, a1, a2);
        double e1 = std::min(std::sqrt(l1), std::sqrt(l2));
        double e2 = std::max(std::sqrt(l1), std::sqrt(l2));
        wb0 = std::max(wb0, std::abs(a1 - e1) + std::abs(a2 - e2));
    }
    bool pass = worst_prod <= 1e-12 && worst_sum <= 1e-12 && wb0 <= 1e-14;
    record("1 alpha-formula reproduction", pass,
           fmt("identity residuals %.2e / %.2e, B=0 error %.2e", worst_prod, worst_sum, wb0));
}

}  // namespace

int main(int argc, char** argv) {
    std::string config_dir = argc > 1 ? argv[1] : "configs";
    (void)config_dir;
    criterion_alpha();
    int fails = 0;
    for (const auto& c : g_results)
        if (!c.pass) ++fails;
    std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - fails,
                g_results.size());
    return fails == 0 ? 0 : 1;
}
