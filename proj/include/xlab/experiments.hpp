#pragma once

// Config-driven experiment catalog. Each run produces CSV artifacts, summary
// values and named assertions whose expected values come from the
// expectations file (or are regenerated by the oracles).

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace xlab {

struct ExperimentInfo {
    std::string name;
    std::string description;
};

/// The six registered experiments, in catalog order.
const std::vector<ExperimentInfo>& list_experiments();

struct ExperimentConfig {
    std::string experiment;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;
};

/// `{"experiment": name, "params": {...}, "seed": u64}`.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct Assertion {
    std::string name;
    double measured = 0.0;
    double expected = 0.0;
    double tol = 0.0;
    std::string relation = "eq"; // eq: |m - e| <= tol; le: m <= e + tol; ge: m >= e - tol
    bool pass = false;
    std::string provenance;
    std::string measured_exact; // set for exact rational comparisons
    std::string expected_exact;
};

struct Artifact {
    std::string file; // relative to the output directory
    std::string content;
};

struct ExperimentResult {
    std::string experiment;
    std::vector<Assertion> assertions;
    std::vector<Artifact> artifacts;
    nlohmann::json summary = nlohmann::json::object();

    bool all_passed() const;
};

/// Expected value record: a decimal or "p/q" literal with its comparison.
struct Expectation {
    std::string value;
    double tol = 0.0;
    std::string relation = "eq";
    std::string provenance;
};

/// Expectations file: `{"version": 1, "entries": {"<experiment>/<assertion>": {...}}}`.
class Expectations {
public:
    Expectations() = default;
    static Expectations load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    std::optional<Expectation> find(const std::string& key) const;
    void set(const std::string& key, const Expectation& e);
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::vector<std::pair<std::string, Expectation>> entries_; // sorted by key
};

struct RunOptions {
    /// Recompute every file-backed expectation with its oracle and store it.
    bool oracle = false;
};

/// Runs one experiment. Unknown names and invalid parameters throw
/// ValidationError; failed assertions are reported in the result.
ExperimentResult run_experiment(const ExperimentConfig& cfg, Expectations& expectations, const RunOptions& opts = {});

/// Writes the artifacts and summary.json into `dir`, which must be empty or
/// absent unless `force`.
void write_result(const ExperimentResult& result, const ExperimentConfig& cfg, const std::filesystem::path& dir,
                  bool force);

/// Summary document as written to summary.json.
nlohmann::json summary_json(const ExperimentResult& result, const ExperimentConfig& cfg);

/// Default location of the shipped expectations file.
std::filesystem::path default_expectations_path();

} // namespace xlab
