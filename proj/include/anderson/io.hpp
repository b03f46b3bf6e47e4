#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "anderson/harness.hpp"
#include "anderson/lattice.hpp"
#include "anderson/localization.hpp"
#include "anderson/operator.hpp"
#include "anderson/parameters.hpp"
#include "anderson/recursion.hpp"
#include "anderson/spectral.hpp"

namespace anderson {

using Json = nlohmann::ordered_json;

// Non-finite doubles are written as the strings "inf", "-inf" and "nan".
Json number(double x);
double number_from(const Json& j);

Json site_to_json(const Site& s, int dim);
Site site_from_json(const Json& j);

Json to_json(const Region& r);
Region region_from_json(const Json& j);
Json to_json(const LatticeBox& box);
Json to_json(const Cover& cover);
Json to_json(const BoxGraph& g);
Json to_json(const BufferedSubset& b);
Json to_json(const Distribution& dist);
Distribution distribution_from_json(const Json& j);
Json to_json(const ParameterSet& ps);
ParameterSet parameters_from_json(const Json& j);
Json to_json(const std::vector<InequalityCheck>& checks);
Json to_json(const ScaleThresholds& t);
Json to_json(const LocalizationVerdict& v);
Json to_json(const RecursionTrace& t);
Json to_json(const InitBound& b);
Json to_json(const ExperimentConfig& c);
// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const Json& j);
Json to_json(const ExperimentRecord& r);
ExperimentRecord record_from_json(const Json& j);
Json to_json(const InitStepReport& r);
Json to_json(const SeparationAudit& a);
Json to_json(const ResidualAudit& a);

// CSV tables.
std::string eigensystem_csv(const Eigensystem& es);
std::string labeled_csv(const LabeledEigensystem& les);
std::string validate_csv(const std::vector<InequalityCheck>& checks);
std::string trace_csv(const RecursionTrace& t);
std::string trace_gnuplot(const RecursionTrace& t);
std::string record_csv(const ExperimentRecord& r);

// Site coordinates header followed by the row-major matrix.
void write_operator_text(std::ostream& os, const FiniteOperator& op);

std::string read_text_file(const std::filesystem::path& path);
// Creates missing parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);
Json read_json_file(const std::filesystem::path& path);

// record.json and record.csv inside `dir`.
void save_record(const ExperimentRecord& r, const std::filesystem::path& dir);
ExperimentRecord load_record(const std::filesystem::path& json_path);

}  // namespace anderson
