#pragma once

#include <optional>
#include <string>
#include <vector>

#include "carmkit/records.hpp"

namespace carmkit {

struct PipelineConfig {
    // sieve / L
    uint64_t y = 10;
    double theta = 1.5;
    double b_exponent = 5.0 / 12.0;
    std::vector<Natural> exclude;   // primes dropped from Q before L
    Natural prune_x = 0;            // 0 disables exceptional-divisor pruning
    uint64_t prune_samples = 0;
    // escape hatch: skip sieve/L and use this modulus directly
    Natural user_modulus = 0;
    std::vector<Natural> user_pool; // optional injected prime pool (implies k0 = 1)
    // harvest
    Natural k_min = 1;
    Natural k_max = 50;
    Natural divisor_cap = 1'000'000;
    Natural x_bound = 0;
    // extra prime
    Natural k1_max = 0; // 0 = default ceiling
    // zero-sum
    uint64_t h_min = 1;
    uint64_t h_max = 8;
    uint64_t target_count = 32;
    // assembly
    CountClass count_class = CountClass::prime;
    uint64_t g_max = 100'000;

    uint64_t seed = 1;
};

json config_to_json(const PipelineConfig& c);
PipelineConfig config_from_json(const json& j);
void validate(const PipelineConfig& c); // throws DomainError
std::string config_fingerprint(const PipelineConfig& c);

// A stage halted; carries a machine-readable reason. Records written before
// the failure remain valid.
class StageFailure : public std::runtime_error {
public:
    StageFailure(std::string stage, std::string reason)
        : std::runtime_error(stage + ": " + reason), stage_(std::move(stage)),
          reason_(std::move(reason)) {}
    const std::string& stage() const { return stage_; }
    const std::string& reason() const { return reason_; }
    json machine_readable() const { return {{"stage", stage_}, {"reason", reason_}}; }

private:
    std::string stage_;
    std::string reason_;
};

struct PipelineResult {
    std::vector<CarmichaelCertificate> certificates;
    json summary;
};

// Runs sieve -> build-l -> harvest -> extra-prime -> zerosum -> assemble,
// appending one record per completed stage to records_path. A rerun against
// the same file and config resumes after the last completed stage.
PipelineResult run_pipeline(const PipelineConfig& config, const std::string& records_path);

struct ReportResult {
    std::string text;
    uint64_t skipped = 0; // malformed record lines
};

ReportResult summarize_records(const std::string& records_path);

} // namespace carmkit
