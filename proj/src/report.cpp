#include "starkres/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace starkres {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_report: cannot open " + path);
    out << body;
    if (!out) throw std::runtime_error("emit_report: write failed for " + path);
}

std::string csv_body(const ExperimentReport& r) {
    std::ostringstream out;
    out << "record,h,kind,re,im,residual,extra1,extra2\n";
    int ridx = 0;
    for (const auto& rec : r.records) {
        double h = rec.value("h", 0.0);
        auto emit_list = [&](const char* key, const char* kind) {
            if (!rec.contains(key)) return;
            for (const auto& e : rec.at(key)) {
                double re = 0, im = 0, resid = 0, x1 = 0, x2 = 0;
                if (e.is_array()) {
                    re = e.size() > 0 ? e[0].get<double>() : 0.0;
                    im = e.size() > 1 ? e[1].get<double>() : 0.0;
                    resid = e.size() > 2 ? e[2].get<double>() : 0.0;
                } else if (e.is_object()) {
                    re = e.value("re", 0.0);
                    im = e.value("im", 0.0);
                    resid = e.value("residual", 0.0);
                    x1 = e.value("k1", 0.0);
                    x2 = e.value("k2", 0.0);
                } else {
                    re = e.get<double>();
                }
                out << ridx << ',' << fmt(h) << ',' << kind << ',' << fmt(re) << ',' << fmt(im)
                    << ',' << fmt(resid) << ',' << fmt(x1) << ',' << fmt(x2) << '\n';
            }
        };
        emit_list("reference_eigenvalues", "reference");
        emit_list("distorted_eigenvalues", "distorted");
        emit_list("predicted_levels", "predicted");
        emit_list("matches", "match");
        if (rec.contains("count")) {
            out << ridx << ',' << fmt(h) << ",count," << fmt(rec.at("count").get<double>())
                << ',' << fmt(rec.value("prediction", 0.0)) << ",0,0,0\n";
        }
        ++ridx;
    }
    return out.str();
}

struct SvgPoint {
    double x, y;
    const char* color;
};

std::string svg_body(const ExperimentReport& r) {
    // complex-plane scatter of distorted (resonance) eigenvalues vs reference
    std::vector<SvgPoint> pts;
    for (const auto& rec : r.records) {
        auto grab = [&](const char* key, const char* color) {
            if (!rec.contains(key)) return;
            for (const auto& e : rec.at(key)) {
                if (e.is_array() && e.size() >= 2)
                    pts.push_back({e[0].get<double>(), e[1].get<double>(), color});
                else if (e.is_object())
                    pts.push_back({e.value("re", 0.0), e.value("im", 0.0), color});
                else if (e.is_number())
                    pts.push_back({e.get<double>(), 0.0, color});
            }
        };
        grab("distorted_eigenvalues", "#d62728");
        grab("reference_eigenvalues", "#1f77b4");
        grab("predicted_levels", "#2ca02c");
    }
    double xmin = -1, xmax = 1, ymin = -1, ymax = 1;
    if (!pts.empty()) {
        xmin = xmax = pts[0].x;
        ymin = ymax = pts[0].y;
        for (const auto& p : pts) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    }
    double padx = 0.05 * (xmax - xmin + 1e-12) + 1e-12;
    double pady = 0.05 * (ymax - ymin + 1e-12) + 1e-12;
    xmin -= padx; xmax += padx; ymin -= pady; ymax += pady;
    const double W = 640, H = 420, ml = 60, mb = 40, mt = 20, mr = 20;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mb - mt); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
        << H - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (W / 2) << "\" y=\"" << (H - 8)
        << "\" font-size=\"12\" text-anchor=\"middle\">Re z</text>\n";
    out << "<text x=\"14\" y=\"" << (H / 2)
        << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << (H / 2)
        << ")\">Im z</text>\n";
    for (const auto& p : pts)
        out << "<circle cx=\"" << fmt(px(p.x)) << "\" cy=\"" << fmt(py(p.y))
            << "\" r=\"2.5\" fill=\"" << p.color << "\" fill-opacity=\"0.75\"/>\n";
    out << "<text x=\"" << (W - mr) << "\" y=\"" << (mt + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << r.experiment
        << ": red distorted, blue reference, green predicted</text>\n";

    // count-vs-h companion panel when counts exist
    std::vector<std::pair<double, double>> counts;
    for (const auto& rec : r.records)
        if (rec.contains("count") && rec.contains("h"))
            counts.push_back({rec.at("h").get<double>(), rec.at("count").get<double>()});
    if (counts.size() >= 2) {
        std::sort(counts.begin(), counts.end());
        out << "<polyline fill=\"none\" stroke=\"#9467bd\" stroke-width=\"1.5\" points=\"";
        double cmax = 0;
        for (auto& c : counts) cmax = std::max(cmax, c.second);
        for (auto& c : counts) {
            double lx = ml + (std::log(c.first / counts.front().first) /
                              std::log(counts.back().first / counts.front().first + 1e-300)) *
                                 (W - ml - mr) * 0.3;
            double ly = mt + 40 - 40.0 * (c.second / (cmax + 1e-300));
            out << fmt(lx) << ',' << fmt(ly) << ' ';
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace

bool ExperimentReport::all_pass() const {
    for (const auto& v : verdicts)
        if (!v.pass) return false;
    return true;
}

void ExperimentReport::add_verdict(const std::string& name, bool pass, double measured,
                                   double tolerance, const std::string& detail) {
    verdicts.push_back({name, pass, measured, tolerance, detail});
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json j;
    j["schema_version"] = schema_version;
    j["experiment"] = experiment;
    j["scenario"] = scenario;
    j["records"] = records;
    j["provenance"] = provenance;
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& v : verdicts) {
        vs.push_back({{"name", v.name},
                      {"pass", v.pass},
                      {"measured", v.measured},
                      {"tolerance", v.tolerance},
                      {"detail", v.detail}});
    }
    j["verdicts"] = vs;
    return j;
}

EmitFormats parse_emit(const std::string& spec) {
    EmitFormats f;
    f.json = false;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "json")
            f.json = true;
        else if (tok == "csv")
            f.csv = true;
        else if (tok == "svg")
            f.svg = true;
        else if (!tok.empty())
            throw std::invalid_argument("emit: unknown format '" + tok + "'");
    }
    return f;
}

std::vector<std::string> emit_report(const ExperimentReport& report, const std::string& out_dir,
                                     const EmitFormats& formats) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;
    if (formats.json) {
        std::string path = out_dir + "/" + report.experiment + ".json";
        write_file(path, report.to_json().dump(2) + "\n");
        written.push_back(path);
    }
    if (formats.csv) {
        std::string path = out_dir + "/" + report.experiment + ".csv";
        write_file(path, csv_body(report));
        written.push_back(path);
    }
    if (formats.svg) {
        std::string path = out_dir + "/" + report.experiment + ".svg";
        write_file(path, svg_body(report));
        written.push_back(path);
    }
    return written;
}

}  // namespace starkres
