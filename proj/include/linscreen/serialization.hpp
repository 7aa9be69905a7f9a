#pragma once

#include <json.hpp>
#include <string>

#include "linscreen/experiments.hpp"

namespace linscreen {

using Json = nlohmann::json;

// Infinities are not representable in JSON numbers; c0_max and bound values
// serialize as the strings "unbounded" / "infeasible" / "inf" instead.

Json rdd_report_to_json(const RddReport& report);
Json ic_report_to_json(const IcReport& report);
Json trial_to_json(const TrialResult& trial);  // timing is intentionally omitted
Json property_report_to_json(const PropertyReport& report);

Json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config(const std::string& path);

CovarianceSpec covariance_from_json(const Json& j);
Json covariance_to_json(const CovarianceSpec& spec);

void write_json(const Json& j, const std::string& path);

/// First line is a config record (the parameters and seed that regenerate
/// the file), then one trial result per line.
void write_trials_jsonl(const ExperimentConfig& config,
                        const std::vector<TrialResult>& trials, const std::string& path);

/// summary.csv: a leading #-comment carries the regenerating config (threads
/// excluded; they never affect results), then the pinned column set
/// n,method,successes,trials,rate,se,bound_sis,bound_holp with two margin
/// columns appended when the dominance check ran.
void write_summary_csv(const SweepSummary& summary, const std::string& path);

/// Self-contained gnuplot script (inline data blocks) plotting rate vs n per
/// method.
void write_gnuplot(const SweepSummary& summary, const std::string& path);

std::string bound_to_string(double v);

}  // namespace linscreen
