#include "otlab/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "otlab/errors.hpp"

namespace otlab {

namespace {

std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Json measure_to_json(const DiscreteMeasure& m, const CovarianceSpec* cov,
                     const std::uint64_t* seed) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["dim"] = m.dim;
    if (m.form == DiscreteMeasure::Form::Atoms) {
        j["form"] = "atoms";
        Json atoms = Json::array();
        for (const auto& a : m.atoms) atoms.push_back({{"point", a.point}, {"mass", a.mass}});
        j["atoms"] = std::move(atoms);
    } else {
        j["form"] = "grid";
        j["grid"] = {{"edges", m.grid.edges}, {"masses", m.masses}};
    }
    if (cov != nullptr) j["covariance"] = {{"c", cov->c}, {"alpha", cov->alpha_decay}};
    if (seed != nullptr) j["seed"] = *seed;
    return j;
}

DiscreteMeasure measure_from_json(const Json& j) {
    const std::string form = j.at("form").get<std::string>();
    if (form == "atoms") {
        std::vector<Atom> atoms;
        for (const auto& a : j.at("atoms")) {
            Atom atom;
            atom.point = a.at("point").get<Vec>();
            atom.mass = a.at("mass").get<double>();
            atoms.push_back(std::move(atom));
        }
        return DiscreteMeasure::from_atoms(std::move(atoms));
    }
    if (form == "grid") {
        GridSpec grid;
        grid.edges = j.at("grid").at("edges").get<std::vector<std::vector<double>>>();
        auto masses = j.at("grid").at("masses").get<std::vector<double>>();
        return DiscreteMeasure::from_grid(std::move(grid), std::move(masses));
    }
    throw ConfigError("unknown measure form '" + form + "'");
}

Json plan_to_json(const TransportPlan& plan) {
    Json entries = Json::array();
    for (const auto& e : plan.entries) entries.push_back({e.i, e.j, e.mass});
    Json j;
    j["schema"] = kSchemaVersion;
    j["entries"] = std::move(entries);
    j["value"] = plan.value;
    j["cost_kind"] = cost_kind_name(plan.cost.kind);
    j["epsilon"] = plan.cost.epsilon;
    j["source_ref"] = hex64(plan.source_ref);
    j["target_ref"] = hex64(plan.target_ref);
    return j;
}

TransportPlan plan_from_json(const Json& j) {
    TransportPlan plan;
    for (const auto& e : j.at("entries"))
        plan.entries.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
    plan.value = j.at("value").get<double>();
    plan.cost.kind = cost_kind_from_name(j.at("cost_kind").get<std::string>());
    plan.cost.epsilon = j.at("epsilon").get<double>();
    if (j.contains("source_ref"))
        plan.source_ref = std::stoull(j.at("source_ref").get<std::string>(), nullptr, 16);
    if (j.contains("target_ref"))
        plan.target_ref = std::stoull(j.at("target_ref").get<std::string>(), nullptr, 16);
    return plan;
}

std::string plan_to_csv(const TransportPlan& plan) {
    std::ostringstream out;
    out << "i,j,mass\n";
    for (const auto& e : plan.entries)
        out << e.i << ',' << e.j << ',' << csv_double(e.mass) << '\n';
    return out.str();
}

Json potential_to_json(const KantorovichPotential& u) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["u_source"] = u.u_source;
    j["u_target"] = u.u_target;
    j["source_points"] = u.source_points;
    j["target_points"] = u.target_points;
    return j;
}

KantorovichPotential potential_from_json(const Json& j) {
    KantorovichPotential u;
    u.u_source = j.at("u_source").get<std::vector<double>>();
    u.u_target = j.at("u_target").get<std::vector<double>>();
    u.source_points = j.at("source_points").get<std::vector<Vec>>();
    u.target_points = j.at("target_points").get<std::vector<Vec>>();
    return u;
}

Json certificate_to_json(const SelectionCertificate& c) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["w1_limit"] = c.w1_limit;
    j["alpha_limit"] = c.alpha_limit;
    j["w1_opt"] = c.w1_opt;
    j["alpha_opt"] = c.alpha_opt;
    j["gaps"] = {{"w1", c.w1_gap}, {"alpha", c.alpha_gap}};
    j["w1_ok"] = c.w1_ok;
    j["alpha_ok"] = c.alpha_ok;
    j["stabilized"] = c.stabilized;
    j["low_confidence"] = c.low_confidence;
    return j;
}

Json ladder_to_json(const EpsilonLadder& ladder) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["epsilons"] = ladder.epsilons;
    j["w1_values"] = ladder.w1_values;
    j["alpha_values"] = ladder.alpha_values;
    j["source_ref"] = hex64(ladder.source_ref);
    j["target_ref"] = hex64(ladder.target_ref);
    Json plans = Json::array();
    for (const auto& p : ladder.plans) plans.push_back(plan_to_json(p));
    j["plans"] = std::move(plans);
    return j;
}

Json convexity_to_json(const ConvexityReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"t", row.t},
                        {"ent_gamma", row.ent_gamma},
                        {"bound", row.bound},
                        {"margin", row.margin}});
    Json j;
    j["schema"] = kSchemaVersion;
    j["mode"] = r.mode == ConvexityMode::CEpsilon ? "c_epsilon" : "w1";
    j["epsilon"] = r.epsilon;
    j["w_value"] = r.w_value;
    j["slack"] = r.slack;
    j["worst_margin"] = r.worst_margin;
    j["pass"] = r.pass;
    j["rows"] = std::move(rows);
    return j;
}

std::string convexity_to_csv(const ConvexityReport& r) {
    std::ostringstream out;
    out << "t,ent_gamma,bound,margin\n";
    for (const auto& row : r.rows)
        out << csv_double(row.t) << ',' << csv_double(row.ent_gamma) << ','
            << csv_double(row.bound) << ',' << csv_double(row.margin) << '\n';
    return out.str();
}

Json geodesic_to_json(const GeodesicReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"t", row.t},
                        {"s", row.s},
                        {"w1_ts", row.w1_ts},
                        {"expected", row.expected},
                        {"rel_err", row.rel_err}});
    Json j;
    j["schema"] = kSchemaVersion;
    j["w1_end_to_end"] = r.w1_end_to_end;
    j["worst_rel_err"] = r.worst_rel_err;
    j["pass"] = r.pass;
    j["rows"] = std::move(rows);
    return j;
}

Json cycle_to_json(const CycleReport& r) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["max_cycle"] = r.max_cycle;
    j["exhaustive"] = r.exhaustive;
    j["cycles_checked"] = r.cycles_checked;
    j["worst_violation"] = r.worst_violation;
    j["tol"] = r.tol;
    j["pass"] = r.pass;
    return j;
}

Json potential_report_to_json(const PotentialReport& r) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["worst_support_gap"] = r.worst_support_gap;
    j["worst_lipschitz_excess"] = r.worst_lipschitz_excess;
    j["pass"] = r.pass;
    return j;
}

Json hsupopt_to_json(const SegmentMonotonicityReport& r) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["premise_count"] = r.premise_count;
    j["nontrivial_count"] = r.nontrivial_count;
    j["worst"] = r.worst;
    j["vacuous"] = r.vacuous;
    j["pass"] = r.pass;
    return j;
}

Json graphness_to_json(const GraphnessReport& r) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["split_sources"] = r.split_sources;
    j["max_target_spread"] = r.max_target_spread;
    j["is_graph"] = r.is_graph();
    if (r.witness) {
        const auto& [p0, p1] = *r.witness;
        j["witness"] = {{"x", p0.x}, {"y0", p0.y}, {"y1", p1.y}};
        j["witness_convexity_gap"] = r.witness_convexity_gap;
        j["witness_sign_probe"] = r.witness_sign_probe;
    }
    return j;
}

Json ratio_to_json(const std::vector<RatioPoint>& curve) {
    Json rows = Json::array();
    for (const auto& p : curve)
        rows.push_back({{"delta", p.delta},
                        {"ratio", p.ratio},
                        {"stderr", p.stderr_},
                        {"accepted", p.accepted}});
    Json j;
    j["schema"] = kSchemaVersion;
    j["rows"] = std::move(rows);
    return j;
}

std::string ratio_to_csv(const std::vector<RatioPoint>& curve) {
    std::ostringstream out;
    out << "delta,ratio,stderr\n";
    for (const auto& p : curve)
        out << csv_double(p.delta) << ',' << csv_double(p.ratio) << ','
            << csv_double(p.stderr_) << '\n';
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOFailure("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IOFailure("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOFailure("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Json read_json_file(const std::string& path) {
    try {
        return Json::parse(read_text_file(path));
    } catch (const Json::parse_error& e) {
        throw ConfigError("invalid JSON in '" + path + "': " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace otlab
