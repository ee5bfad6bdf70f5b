#include "carmkit/records.hpp"

#include <fstream>

namespace carmkit {

json natural_to_json(const Natural& n) {
    return n.get_str();
}

Natural natural_from_json(const json& j) {
    return Natural(j.get<std::string>());
}

namespace {

json naturals_to_json(const std::vector<Natural>& v) {
    json arr = json::array();
    for (const auto& n : v)
        arr.push_back(natural_to_json(n));
    return arr;
}

std::vector<Natural> naturals_from_json(const json& j) {
    std::vector<Natural> v;
    for (const auto& e : j)
        v.push_back(natural_from_json(e));
    return v;
}

} // namespace

json to_json(const SmoothPrimeSet& q) {
    return {{"y", q.params.y}, {"theta", q.params.theta}, {"primes", naturals_to_json(q.primes)}};
}

SmoothPrimeSet smooth_set_from_json(const json& j) {
    SmoothPrimeSet q;
    q.params.y = j.at("y").get<uint64_t>();
    q.params.theta = j.at("theta").get<double>();
    q.primes = naturals_from_json(j.at("primes"));
    return q;
}

json to_json(const Modulus& m) {
    return {{"value", natural_to_json(m.value)},
            {"prime_factors", naturals_to_json(m.prime_factors)},
            {"lambda", natural_to_json(m.lambda)}};
}

Modulus modulus_from_json(const json& j) {
    Modulus m;
    m.value = natural_from_json(j.at("value"));
    m.prime_factors = naturals_from_json(j.at("prime_factors"));
    m.lambda = natural_from_json(j.at("lambda"));
    return m;
}

json to_json(const HarvestedPrimes& pool) {
    json entries = json::array();
    for (const auto& e : pool.entries)
        entries.push_back({{"p", natural_to_json(e.p)}, {"d", natural_to_json(e.d)}});
    return {{"k", natural_to_json(pool.k)},
            {"entries", entries},
            {"x_bound", natural_to_json(pool.x_bound)}};
}

HarvestedPrimes harvested_from_json(const json& j) {
    HarvestedPrimes pool;
    pool.k = natural_from_json(j.at("k"));
    pool.x_bound = natural_from_json(j.at("x_bound"));
    for (const auto& e : j.at("entries"))
        pool.entries.push_back({natural_from_json(e.at("p")), natural_from_json(e.at("d"))});
    return pool;
}

json to_json(const ExtraPrime& ep) {
    return {{"k1", natural_to_json(ep.k1)},
            {"P", natural_to_json(ep.p)},
            {"modulus_base", natural_to_json(ep.modulus_base)},
            {"hb_ratio", ep.hb_ratio}};
}

ExtraPrime extra_prime_from_json(const json& j) {
    ExtraPrime ep;
    ep.k1 = natural_from_json(j.at("k1"));
    ep.p = natural_from_json(j.at("P"));
    ep.modulus_base = natural_from_json(j.at("modulus_base"));
    ep.hb_ratio = j.at("hb_ratio").get<double>();
    return ep;
}

json to_json(const ZeroSumFamily& fam) {
    json sets = json::array();
    for (const auto& s : fam.sets)
        sets.push_back(naturals_to_json(s));
    return {{"modulus", natural_to_json(fam.modulus)},
            {"h", fam.h},
            {"sets", sets},
            {"disjoint_count", fam.disjoint_count}};
}

ZeroSumFamily family_from_json(const json& j) {
    ZeroSumFamily fam;
    fam.modulus = natural_from_json(j.at("modulus"));
    fam.h = j.at("h").get<uint64_t>();
    fam.disjoint_count = j.at("disjoint_count").get<uint64_t>();
    for (const auto& s : j.at("sets"))
        fam.sets.push_back(naturals_from_json(s));
    return fam;
}

json to_json(const CarmichaelCertificate& cert) {
    return {{"n", natural_to_json(cert.n)},
            {"factors", naturals_to_json(cert.factors)},
            {"g", cert.g},
            {"h", cert.h},
            {"includes_extra_prime", cert.includes_extra_prime},
            {"factor_count", cert.factor_count},
            {"count_class", to_string(cert.count_class)},
            {"korselt_witnesses", naturals_to_json(cert.korselt_witnesses)}};
}

CarmichaelCertificate certificate_from_json(const json& j) {
    CarmichaelCertificate cert;
    cert.n = natural_from_json(j.at("n"));
    cert.factors = naturals_from_json(j.at("factors"));
    cert.g = j.at("g").get<uint64_t>();
    cert.h = j.at("h").get<uint64_t>();
    cert.includes_extra_prime = j.at("includes_extra_prime").get<bool>();
    cert.factor_count = j.at("factor_count").get<uint64_t>();
    auto cls = count_class_from_string(j.at("count_class").get<std::string>());
    cert.count_class = cls.value_or(CountClass::none);
    cert.korselt_witnesses = naturals_from_json(j.at("korselt_witnesses"));
    return cert;
}

json to_json(const LambdaBoundReport& r) {
    return {{"lambda", natural_to_json(r.lambda)},
            {"log_lambda", r.log_lambda},
            {"log_bound", r.log_bound},
            {"holds", r.holds},
            {"log_L", r.log_L},
            {"log_L_shape", r.log_L_shape},
            {"l_within_shape", r.l_within_shape},
            {"reciprocal_sum", r.reciprocal_sum}};
}

json to_json(const HbGaugeReport& r) {
    json table = json::array();
    for (const auto& row : r.table)
        table.push_back({{"d", row.d}, {"least_prime", row.least_prime}, {"ratio", row.ratio}});
    return {{"d_max", r.d_max},
            {"residue", r.residue},
            {"max_ratio", r.max_ratio},
            {"argmax_d", r.argmax_d},
            {"table", table}};
}

json to_json(const AgpCheckReport& r) {
    return {{"n", r.n},      {"r", r.r},
            {"t", r.t},      {"trials", r.trials},
            {"bound", r.bound}, {"min_observed", r.min_observed},
            {"violations", r.violations}};
}

json to_json(const KorseltReport& r) {
    json out = {{"ok", r.ok}};
    if (r.ok) {
        out["n"] = natural_to_json(r.n);
        out["witnesses"] = naturals_to_json(r.witnesses);
    } else {
        out["failure"] = r.failure;
    }
    return out;
}

json to_json(const RunRecord& r) {
    return {{"kind", r.kind},
            {"timestamp", r.timestamp},
            {"config_fingerprint", r.config_fingerprint},
            {"payload", r.payload}};
}

RunRecord record_from_json(const json& j) {
    RunRecord r;
    r.kind = j.at("kind").get<std::string>();
    r.timestamp = j.at("timestamp").get<uint64_t>();
    r.config_fingerprint = j.at("config_fingerprint").get<std::string>();
    r.payload = j.at("payload");
    return r;
}

RecordWriter::RecordWriter(std::string path) : path_(std::move(path)) {
    auto existing = read_records(path_);
    seq_ = existing.records.size();
}

void RecordWriter::append(const std::string& kind, const std::string& fp, json payload) {
    RunRecord r{kind, seq_++, fp, std::move(payload)};
    std::ofstream out(path_, std::ios::app);
    if (!out)
        throw std::runtime_error("records: cannot open " + path_ + " for append");
    out << to_json(r).dump() << '\n';
}

RecordReadResult read_records(const std::string& path) {
    RecordReadResult result;
    std::ifstream in(path);
    if (!in)
        return result;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        try {
            result.records.push_back(record_from_json(json::parse(line)));
        } catch (const std::exception&) {
            ++result.skipped;
        }
    }
    return result;
}

std::string fingerprint(const std::string& canonical) {
    uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

} // namespace carmkit
