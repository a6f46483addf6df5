#include "starkres/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace starkres {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!j.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
}

PotentialTerm parse_term(const json& j) {
    require_keys(j, "potential term",
                 {"kind", "amplitude", "x0", "y0", "sigma", "envelope_scale", "lambda1",
                  "lambda2"});
    PotentialTerm t;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "zero")
        t.kind = TermKind::Zero;
    else if (kind == "gaussian_bump")
        t.kind = TermKind::GaussianBump;
    else if (kind == "enveloped_quadratic_well")
        t.kind = TermKind::EnvelopedQuadraticWell;
    else
        throw std::invalid_argument("config: unknown potential kind '" + kind + "'");
    t.amplitude = j.value("amplitude", 0.0);
    t.x0 = j.value("x0", 0.0);
    t.y0 = j.value("y0", 0.0);
    t.sigma = j.value("sigma", 1.0);
    t.envelope_scale = j.value("envelope_scale", 1.0);
    t.lambda1 = j.value("lambda1", 1.0);
    t.lambda2 = j.value("lambda2", 1.0);
    if (t.kind == TermKind::GaussianBump && t.sigma <= 0.0)
        throw std::invalid_argument("config: gaussian_bump needs sigma > 0");
    if (t.kind == TermKind::EnvelopedQuadraticWell &&
        (t.envelope_scale <= 0.0 || t.lambda1 <= 0.0 || t.lambda2 <= 0.0))
        throw std::invalid_argument("config: enveloped well needs L, lambda1, lambda2 > 0");
    return t;
}

WellRegion parse_region(const json& j) {
    require_keys(j, "surgery.region", {"shape", "cx", "cy", "radius", "half_x", "half_y"});
    WellRegion r;
    std::string shape = j.value("shape", std::string("disc"));
    if (shape == "disc")
        r.shape = WellRegion::Shape::Disc;
    else if (shape == "rectangle")
        r.shape = WellRegion::Shape::Rectangle;
    else
        throw std::invalid_argument("config: region shape must be disc or rectangle");
    r.cx = j.value("cx", 0.0);
    r.cy = j.value("cy", 0.0);
    r.radius = j.value("radius", 1.0);
    r.half_x = j.value("half_x", 1.0);
    r.half_y = j.value("half_y", 1.0);
    return r;
}

}  // namespace

int GridSpec::resolve_n(double h, double length) const {
    double d = h / points_per_h;
    int n = static_cast<int>(std::ceil(length / d)) - 1;
    n = std::max(n, min_n);
    n = std::min(n, max_n);
    return n;
}

ScenarioConfig parse_config(const nlohmann::json& j) {
    require_keys(j, "top level",
                 {"schema_version", "potential", "params", "distortion", "surgery", "grid",
                  "window", "experiment"});
    ScenarioConfig c;
    c.raw = j;
    c.schema_version = j.value("schema_version", 1);

    const json& pot = j.at("potential");
    require_keys(pot, "potential", {"terms"});
    for (const json& t : pot.at("terms")) c.potential.terms.push_back(parse_term(t));

    const json& par = j.at("params");
    require_keys(par, "params", {"B", "h_list"});
    c.B = par.at("B").get<double>();
    if (c.B <= 0.0) throw std::invalid_argument("config: B must be positive");
    c.h_list = par.at("h_list").get<std::vector<double>>();
    if (c.h_list.empty()) throw std::invalid_argument("config: h_list must not be empty");
    for (std::size_t i = 0; i < c.h_list.size(); ++i) {
        if (c.h_list[i] <= 0.0) throw std::invalid_argument("config: h values must be positive");
        if (i > 0 && c.h_list[i] >= c.h_list[i - 1])
            throw std::invalid_argument("config: h_list must be descending");
    }

    if (j.contains("distortion")) {
        const json& d = j.at("distortion");
        require_keys(d, "distortion", {"R0", "ramp_width", "theta_re", "theta_im", "mode",
                                       "mtilde"});
        c.distortion.R0 = d.value("R0", 2.0);
        c.distortion.ramp_width = d.value("ramp_width", 1.0);
        c.distortion.theta = Complex(d.value("theta_re", 0.0), d.value("theta_im", 0.0));
        std::string mode = d.value("mode", std::string("fixed"));
        if (mode == "fixed")
            c.distortion.mode = ThetaMode::Fixed;
        else if (mode == "h-log-h")
            c.distortion.mode = ThetaMode::HLogH;
        else
            throw std::invalid_argument("config: distortion mode must be fixed or h-log-h");
        c.distortion.mtilde = d.value("mtilde", 1.0);
        if (c.distortion.R0 <= 0.0 || c.distortion.ramp_width <= 0.0)
            throw std::invalid_argument("config: distortion needs R0 > 0 and ramp_width > 0");
    }

    const json& w = j.at("window");
    require_keys(w, "window", {"a", "b"});
    c.window_a = w.at("a").get<double>();
    c.window_b = w.at("b").get<double>();
    if (!(c.window_a <= c.window_b))
        throw std::invalid_argument("config: window requires a <= b");

    if (j.contains("surgery")) {
        const json& s = j.at("surgery");
        require_keys(s, "surgery", {"region", "delta", "ramp"});
        c.surgery.region = parse_region(s.at("region"));
        c.delta = s.value("delta", 0.1);
        c.surgery.ramp = s.value("ramp", 0.5);
        if (c.delta <= 0.0 || c.surgery.ramp <= 0.0)
            throw std::invalid_argument("config: surgery needs delta > 0 and ramp > 0");
        c.surgery.level = c.window_b + 2.0 * c.delta;
    }

    const json& g = j.at("grid");
    require_keys(g, "grid",
                 {"x_min", "x_max", "y_min", "y_max", "points_per_h", "nx", "ny", "min_n",
                  "max_n"});
    c.grid.x_min = g.at("x_min").get<double>();
    c.grid.x_max = g.at("x_max").get<double>();
    c.grid.y_min = g.at("y_min").get<double>();
    c.grid.y_max = g.at("y_max").get<double>();
    c.grid.points_per_h = g.value("points_per_h", 4.0);
    c.grid.nx = g.value("nx", 0);
    c.grid.ny = g.value("ny", 0);
    c.grid.min_n = g.value("min_n", 31);
    c.grid.max_n = g.value("max_n", 1400);
    if (!(c.grid.x_max > c.grid.x_min) || !(c.grid.y_max > c.grid.y_min))
        throw std::invalid_argument("config: degenerate grid box");

    if (j.contains("experiment")) {
        const json& e = j.at("experiment");
        require_keys(e, "experiment",
                     {"escape_radius", "fast_exit_x", "t_max_periods", "flow_tol",
                      "trap_samples", "seed", "mc_samples", "mc_box", "volume_region",
                      "quadrature_resolution", "gamma", "epsilon", "num_pairs",
                      "window_levels", "dense_cap", "arnoldi_tol", "resolvent_grid_re",
                      "resolvent_grid_im", "c_resolvent", "compute_distorted", "filled",
                      "refine_max_rounds"});
        ExperimentKnobs& k = c.knobs;
        k.escape_radius = e.value("escape_radius", 20.0);
        k.fast_exit_x = e.value("fast_exit_x", 40.0);
        k.t_max_periods = e.value("t_max_periods", 50.0);
        k.flow_tol = e.value("flow_tol", 1e-10);
        k.trap_samples = e.value("trap_samples", 200);
        k.seed = e.value("seed", static_cast<std::uint64_t>(1));
        k.mc_samples = e.value("mc_samples", static_cast<long long>(1000000));
        if (e.contains("mc_box")) {
            auto v = e.at("mc_box").get<std::vector<double>>();
            if (v.size() != 8)
                throw std::invalid_argument("config: mc_box needs 8 numbers (lo4, hi4)");
            for (int d = 0; d < 4; ++d) {
                k.mc_box.lo[d] = v[d];
                k.mc_box.hi[d] = v[4 + d];
            }
        }
        if (e.contains("volume_region")) {
            auto v = e.at("volume_region").get<std::vector<double>>();
            if (v.size() != 4)
                throw std::invalid_argument("config: volume_region needs 4 numbers");
            k.volume_region = Rectangle{v[0], v[1], v[2], v[3]};
        }
        k.quadrature_resolution = e.value("quadrature_resolution", 800);
        k.gamma = e.value("gamma", 0.01);
        k.epsilon = e.value("epsilon", 0.0);
        k.num_pairs = e.value("num_pairs", 6);
        k.window_levels = e.value("window_levels", 0.0);
        k.dense_cap = e.value("dense_cap", 2000);
        k.arnoldi_tol = e.value("arnoldi_tol", 1e-10);
        k.resolvent_grid_re = e.value("resolvent_grid_re", 5);
        k.resolvent_grid_im = e.value("resolvent_grid_im", 3);
        k.c_resolvent = e.value("c_resolvent", 0.0);
        k.compute_distorted = e.value("compute_distorted", true);
        k.filled = e.value("filled", false);
        k.refine_max_rounds = e.value("refine_max_rounds", 3);
    }
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return parse_config(j);
}

}  // namespace starkres
