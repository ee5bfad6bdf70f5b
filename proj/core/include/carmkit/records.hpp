#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "carmkit/arith.hpp"
#include "carmkit/assemble.hpp"
#include "carmkit/extraprime.hpp"
#include "carmkit/harvest.hpp"
#include "carmkit/lbuilder.hpp"
#include "carmkit/sieve.hpp"
#include "carmkit/zerosum.hpp"

namespace carmkit {

using json = nlohmann::json;

// Integers cross every file boundary as decimal strings.
json natural_to_json(const Natural& n);
Natural natural_from_json(const json& j);

json to_json(const SmoothPrimeSet& q);
SmoothPrimeSet smooth_set_from_json(const json& j);

json to_json(const Modulus& m);
Modulus modulus_from_json(const json& j);

json to_json(const HarvestedPrimes& pool);
HarvestedPrimes harvested_from_json(const json& j);

json to_json(const ExtraPrime& ep);
ExtraPrime extra_prime_from_json(const json& j);

json to_json(const ZeroSumFamily& fam);
ZeroSumFamily family_from_json(const json& j);

json to_json(const CarmichaelCertificate& cert);
CarmichaelCertificate certificate_from_json(const json& j);

json to_json(const LambdaBoundReport& r);
json to_json(const HbGaugeReport& r);
json to_json(const AgpCheckReport& r);
json to_json(const KorseltReport& r);

// One line-delimited record. The timestamp is a logical sequence number by
// default so identical runs produce byte-identical streams.
struct RunRecord {
    std::string kind; // sieve | modulus | harvest | extra_prime | family | certificate | report
    uint64_t timestamp = 0;
    std::string config_fingerprint;
    json payload;
};

json to_json(const RunRecord& r);
RunRecord record_from_json(const json& j);

// Append-only JSONL sink.
class RecordWriter {
public:
    explicit RecordWriter(std::string path);
    void append(const std::string& kind, const std::string& fingerprint, json payload);
    uint64_t next_seq() const { return seq_; }
    void set_next_seq(uint64_t s) { seq_ = s; }

private:
    std::string path_;
    uint64_t seq_ = 0;
};

struct RecordReadResult {
    std::vector<RunRecord> records;
    uint64_t skipped = 0; // malformed lines
};

RecordReadResult read_records(const std::string& path);

// Stable FNV-1a hex fingerprint of a canonical string.
std::string fingerprint(const std::string& canonical);

} // namespace carmkit
