#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "otlab/diagnostics.hpp"
#include "otlab/entropy.hpp"
#include "otlab/measure.hpp"
#include "otlab/plan.hpp"
#include "otlab/selection.hpp"

namespace otlab {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "v1";

// --- measures ---
Json measure_to_json(const DiscreteMeasure& m, const CovarianceSpec* cov = nullptr,
                     const std::uint64_t* seed = nullptr);
DiscreteMeasure measure_from_json(const Json& j);

// --- plans and potentials ---
Json plan_to_json(const TransportPlan& plan);
TransportPlan plan_from_json(const Json& j);
std::string plan_to_csv(const TransportPlan& plan);

Json potential_to_json(const KantorovichPotential& u);
KantorovichPotential potential_from_json(const Json& j);

// --- reports ---
Json certificate_to_json(const SelectionCertificate& c);
Json ladder_to_json(const EpsilonLadder& ladder);
Json convexity_to_json(const ConvexityReport& r);
std::string convexity_to_csv(const ConvexityReport& r);
Json geodesic_to_json(const GeodesicReport& r);
Json cycle_to_json(const CycleReport& r);
Json potential_report_to_json(const PotentialReport& r);
Json hsupopt_to_json(const SegmentMonotonicityReport& r);
Json graphness_to_json(const GraphnessReport& r);
Json ratio_to_json(const std::vector<RatioPoint>& curve);
std::string ratio_to_csv(const std::vector<RatioPoint>& curve);

// --- files and hashing ---
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

}  // namespace otlab
