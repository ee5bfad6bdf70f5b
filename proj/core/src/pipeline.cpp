#include "carmkit/pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace carmkit {

json config_to_json(const PipelineConfig& c) {
    json pool = json::array();
    for (const auto& p : c.user_pool)
        pool.push_back(natural_to_json(p));
    json exclude = json::array();
    for (const auto& p : c.exclude)
        exclude.push_back(natural_to_json(p));
    return {{"y", c.y},
            {"theta", c.theta},
            {"b_exponent", c.b_exponent},
            {"exclude", exclude},
            {"prune_x", natural_to_json(c.prune_x)},
            {"prune_samples", c.prune_samples},
            {"user_modulus", natural_to_json(c.user_modulus)},
            {"user_pool", pool},
            {"k_min", natural_to_json(c.k_min)},
            {"k_max", natural_to_json(c.k_max)},
            {"divisor_cap", natural_to_json(c.divisor_cap)},
            {"x_bound", natural_to_json(c.x_bound)},
            {"k1_max", natural_to_json(c.k1_max)},
            {"h_min", c.h_min},
            {"h_max", c.h_max},
            {"target_count", c.target_count},
            {"count_class", to_string(c.count_class)},
            {"g_max", c.g_max},
            {"seed", c.seed}};
}

PipelineConfig config_from_json(const json& j) {
    PipelineConfig c;
    if (j.contains("y")) c.y = j.at("y").get<uint64_t>();
    if (j.contains("theta")) c.theta = j.at("theta").get<double>();
    if (j.contains("b_exponent")) c.b_exponent = j.at("b_exponent").get<double>();
    if (j.contains("exclude"))
        for (const auto& e : j.at("exclude"))
            c.exclude.push_back(natural_from_json(e));
    if (j.contains("prune_x")) c.prune_x = natural_from_json(j.at("prune_x"));
    if (j.contains("prune_samples")) c.prune_samples = j.at("prune_samples").get<uint64_t>();
    if (j.contains("user_modulus")) c.user_modulus = natural_from_json(j.at("user_modulus"));
    if (j.contains("user_pool"))
        for (const auto& e : j.at("user_pool"))
            c.user_pool.push_back(natural_from_json(e));
    if (j.contains("k_min")) c.k_min = natural_from_json(j.at("k_min"));
    if (j.contains("k_max")) c.k_max = natural_from_json(j.at("k_max"));
    if (j.contains("divisor_cap")) c.divisor_cap = natural_from_json(j.at("divisor_cap"));
    if (j.contains("x_bound")) c.x_bound = natural_from_json(j.at("x_bound"));
    if (j.contains("k1_max")) c.k1_max = natural_from_json(j.at("k1_max"));
    if (j.contains("h_min")) c.h_min = j.at("h_min").get<uint64_t>();
    if (j.contains("h_max")) c.h_max = j.at("h_max").get<uint64_t>();
    if (j.contains("target_count")) c.target_count = j.at("target_count").get<uint64_t>();
    if (j.contains("count_class")) {
        auto cls = count_class_from_string(j.at("count_class").get<std::string>());
        if (!cls)
            throw DomainError("config: unknown count_class " +
                              j.at("count_class").get<std::string>());
        c.count_class = *cls;
    }
    if (j.contains("g_max")) c.g_max = j.at("g_max").get<uint64_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
    return c;
}

void validate(const PipelineConfig& c) {
    if (c.user_modulus == 0) {
        if (c.y < 3)
            throw DomainError("config: y must be >= 3");
        if (!(c.theta > 1.0 && c.theta < 2.0))
            throw DomainError("config: theta must lie in (1, 2)");
    } else if (c.user_modulus < 2) {
        throw DomainError("config: user modulus must be >= 2");
    }
    if (!(c.b_exponent > 0.0 && c.b_exponent < 1.0))
        throw DomainError("config: B exponent must lie in (0, 1)");
    if (c.k_min < 1 || c.k_max < c.k_min)
        throw DomainError("config: need 1 <= k_min <= k_max");
    if (c.h_min < 1 || c.h_max < c.h_min)
        throw DomainError("config: need 1 <= h_min <= h_max");
    if (c.target_count < 1)
        throw DomainError("config: target_count must be >= 1");
    if (c.g_max < 1)
        throw DomainError("config: g_max must be >= 1");
}

std::string config_fingerprint(const PipelineConfig& c) {
    return fingerprint(config_to_json(c).dump());
}

namespace {

struct StageState {
    std::map<std::string, std::vector<json>> by_kind;
    bool complete = false; // a report record exists
};

StageState load_state(const std::string& path, const std::string& fp) {
    StageState st;
    auto rr = read_records(path);
    for (const auto& r : rr.records) {
        if (r.config_fingerprint != fp)
            continue;
        st.by_kind[r.kind].push_back(r.payload);
        if (r.kind == "report")
            st.complete = true;
    }
    return st;
}

uint64_t clamped_davenport_bound(const Natural& m_work) {
    auto f = factorize(m_work);
    Natural lambda = carmichael_lambda(f);
    Natural phi = 1;
    for (const auto& pf : f.factors) {
        Natural pw;
        mpz_pow_ui(pw.get_mpz_t(), pf.prime.get_mpz_t(), pf.exponent - 1);
        phi *= pw * (pf.prime - 1);
    }
    Natural bound = davenport_bound(lambda, phi);
    if (!bound.fits_ulong_p())
        return UINT64_MAX / 4;
    return bound.get_ui();
}

} // namespace

PipelineResult run_pipeline(const PipelineConfig& config, const std::string& records_path) {
    validate(config);
    const std::string fp = config_fingerprint(config);
    StageState state = load_state(records_path, fp);
    RecordWriter writer(records_path);

    PipelineResult result;
    if (state.complete) {
        for (const auto& p : state.by_kind["certificate"])
            result.certificates.push_back(certificate_from_json(p));
        result.summary = state.by_kind["report"].back();
        return result;
    }

    const bool user_mode = config.user_modulus != 0;
    json summary;

    // Stage 1+2: sieve and modulus.
    Natural m_base;                       // L, or the user modulus
    std::vector<Natural> harvest_divisors;
    try {
        if (user_mode) {
            m_base = config.user_modulus;
            if (state.by_kind["modulus"].empty())
                writer.append("modulus", fp,
                              {{"user", true}, {"value", natural_to_json(m_base)}});
            auto f = factorize(m_base);
            harvest_divisors = enumerate_divisors(f, config.divisor_cap);
            summary["modulus"] = natural_to_json(m_base);
        } else {
            SmoothPrimeSet q;
            if (!state.by_kind["sieve"].empty()) {
                q = smooth_set_from_json(state.by_kind["sieve"].back());
            } else {
                q = build_Q({config.y, config.theta});
                writer.append("sieve", fp, to_json(q));
            }
            summary["q_size"] = q.primes.size();
            summary["density_ratio"] = density_report(q);

            Modulus l;
            if (!state.by_kind["modulus"].empty()) {
                l = modulus_from_json(state.by_kind["modulus"].back().at("modulus"));
                summary["lambda_report"] = state.by_kind["modulus"].back().at("lambda_report");
            } else {
                std::set<Natural> excluded(config.exclude.begin(), config.exclude.end());
                l = assemble_L(q, excluded);
                json prune_info;
                if (config.prune_x != 0 && config.prune_samples > 0) {
                    PruneOptions popts;
                    popts.b_exponent = config.b_exponent;
                    popts.seed = config.seed;
                    auto [pruned, log] =
                        prune_exceptional(l, config.prune_x, config.prune_samples, popts);
                    l = pruned;
                    json removals = json::array();
                    for (const auto& r : log.removals)
                        removals.push_back({{"divisor", natural_to_json(r.divisor)},
                                            {"removed_prime", natural_to_json(r.removed_prime)},
                                            {"ap_count", r.ap_count},
                                            {"threshold", r.threshold}});
                    prune_info = {{"divisors_sampled", log.divisors_sampled},
                                  {"removals", removals}};
                }
                auto lam = lambda_bound_check(l, q.params);
                json payload = {{"modulus", to_json(l)}, {"lambda_report", to_json(lam)}};
                if (!prune_info.is_null())
                    payload["prune"] = prune_info;
                writer.append("modulus", fp, payload);
                summary["lambda_report"] = to_json(lam);
            }
            m_base = l.value;
            harvest_divisors = enumerate_divisors(l, config.divisor_cap);
            summary["modulus"] = natural_to_json(m_base);
        }
    } catch (const DomainError& e) {
        throw StageFailure("build-l", e.what());
    } catch (const BudgetExceeded& e) {
        throw StageFailure("build-l", e.what());
    }

    // Stage 3: harvest.
    Natural k0;
    HarvestedPrimes pool;
    try {
        if (!state.by_kind["harvest"].empty()) {
            const auto& p = state.by_kind["harvest"].back();
            k0 = natural_from_json(p.at("k0"));
            pool = harvested_from_json(p.at("pool"));
            summary["pool_size"] = pool.entries.size();
            summary["k_scan"] = p.at("scan");
        } else if (!config.user_pool.empty()) {
            k0 = 1;
            pool.k = 1;
            pool.x_bound = config.x_bound;
            for (const auto& p : config.user_pool) {
                if (!is_prime(p))
                    throw DomainError("injected pool member " + p.get_str() + " is not prime");
                pool.entries.push_back({p, p - 1});
            }
            std::sort(pool.entries.begin(), pool.entries.end(),
                      [](const HarvestEntry& a, const HarvestEntry& b) { return a.p < b.p; });
            json scan = json::array();
            scan.push_back({{"k", "1"}, {"pool_size", pool.entries.size()}});
            writer.append("harvest", fp, {{"k0", natural_to_json(k0)},
                                          {"pool", to_json(pool)},
                                          {"scan", scan}});
            summary["pool_size"] = pool.entries.size();
            summary["k_scan"] = scan;
        } else {
            auto sel = select_k0_from_divisors(harvest_divisors, config.k_min, config.k_max,
                                               config.x_bound);
            k0 = sel.k0;
            pool = std::move(sel.pool);
            json scan = json::array();
            for (const auto& row : sel.scan)
                scan.push_back({{"k", natural_to_json(row.k)}, {"pool_size", row.pool_size}});
            writer.append("harvest", fp, {{"k0", natural_to_json(k0)},
                                          {"pool", to_json(pool)},
                                          {"scan", scan}});
            summary["pool_size"] = pool.entries.size();
            summary["k_scan"] = scan;
        }
        summary["k0"] = natural_to_json(k0);
    } catch (const DomainError& e) {
        throw StageFailure("harvest", e.what());
    } catch (const BudgetExceeded& e) {
        throw StageFailure("harvest", e.what());
    }

    // Stage 4: extra prime (only the prime count class needs one).
    const bool want_extra = config.count_class == CountClass::prime;
    std::optional<ExtraPrime> extra;
    Natural m_work = m_base * k0;
    try {
        if (!state.by_kind["extra_prime"].empty()) {
            const auto& p = state.by_kind["extra_prime"].back();
            if (p.at("included").get<bool>())
                extra = extra_prime_from_json(p.at("extra"));
        } else if (want_extra) {
            extra = find_k1_for_base(m_base * k0, config.k1_max);
            writer.append("extra_prime", fp, {{"included", true}, {"extra", to_json(*extra)}});
        } else {
            writer.append("extra_prime", fp, {{"included", false}});
        }
        if (extra) {
            m_work = extra->modulus_base * extra->k1;
            summary["k1"] = natural_to_json(extra->k1);
            summary["extra_prime"] = natural_to_json(extra->p);
            summary["hb_ratio"] = extra->hb_ratio;
        }
        summary["m_work"] = natural_to_json(m_work);
    } catch (const DomainError& e) {
        throw StageFailure("extra-prime", e.what());
    } catch (const BudgetExceeded& e) {
        throw StageFailure("extra-prime", e.what());
    }

    // Stage 5: zero-sum families.
    uint64_t h_max_eff = std::min<uint64_t>(config.h_max, pool.entries.size());
    std::map<uint64_t, ZeroSumFamily> families;
    uint64_t h_sel = 0;
    bool window_fallback = false;
    try {
        if (config.h_min > h_max_eff)
            throw DomainError("pool of size " + std::to_string(pool.entries.size()) +
                              " is smaller than h_min");
        bool have_all = true;
        std::map<uint64_t, json> stored;
        for (const auto& p : state.by_kind["family"])
            stored[p.at("h").get<uint64_t>()] = p;
        for (uint64_t h = config.h_min; h <= h_max_eff; ++h)
            if (!stored.count(h))
                have_all = false;
        if (have_all && !stored.empty()) {
            for (uint64_t h = config.h_min; h <= h_max_eff; ++h)
                families.emplace(h, family_from_json(stored[h]));
        } else {
            families = find_zero_sum_sets(pool, m_work, config.h_min, h_max_eff,
                                          config.target_count, /*disjoint=*/true);
            for (const auto& [h, fam] : families) {
                (void)h;
                writer.append("family", fp, to_json(fam));
            }
        }
        json sizes = json::object();
        for (const auto& [h, fam] : families)
            sizes[std::to_string(h)] = fam.sets.size();
        summary["family_sizes"] = sizes;

        uint64_t n_bound = clamped_davenport_bound(m_work);
        summary["davenport_bound"] = n_bound;
        auto sel = select_h(families, n_bound);
        h_sel = sel.h;
        window_fallback = sel.window_fallback;
        summary["h"] = h_sel;
        summary["h_window_fallback"] = window_fallback;
    } catch (const DomainError& e) {
        throw StageFailure("zerosum", e.what());
    } catch (const BudgetExceeded& e) {
        throw StageFailure("zerosum", e.what());
    }

    // Stage 6: assembly.
    try {
        const auto& fam = families.at(h_sel);
        uint64_t available = fam.sets.size();
        uint64_t extra_count = extra ? 1 : 0;
        uint64_t g = 0;
        if (config.count_class == CountClass::prime) {
            for (uint64_t cand = 1; cand <= std::min(config.g_max, available); ++cand) {
                if (cand * h_sel + extra_count < 3)
                    continue;
                if (is_prime_u64(cand * h_sel + 1)) {
                    g = cand;
                    break;
                }
            }
            if (g == 0)
                throw DomainError("no g <= " + std::to_string(available) + " with g*" +
                                  std::to_string(h_sel) + "+1 prime (have " +
                                  std::to_string(available) + " disjoint sets)");
        } else {
            uint64_t g0 = find_g0(h_sel, config.count_class, config.g_max);
            if (g0 > available)
                throw DomainError("need " + std::to_string(g0) + " disjoint sets for class " +
                                  to_string(config.count_class) + " at h = " +
                                  std::to_string(h_sel) + ", have " + std::to_string(available));
            if (g0 * h_sel + extra_count < 3)
                throw DomainError("factor count would fall below 3");
            g = g0;
        }

        std::set<std::string> already;
        for (const auto& p : state.by_kind["certificate"])
            already.insert(p.at("n").get<std::string>());

        for (uint64_t chunk = 0; (chunk + 1) * g <= available; ++chunk) {
            std::vector<std::vector<Natural>> sets(fam.sets.begin() + chunk * g,
                                                   fam.sets.begin() + (chunk + 1) * g);
            auto cert = assemble_carmichael(sets, extra, m_work);
            if (config.count_class != CountClass::none &&
                cert.count_class != config.count_class)
                throw InternalError("assembled class " + to_string(cert.count_class) +
                                    " does not match requested " + to_string(config.count_class));
            if (!already.count(cert.n.get_str()))
                writer.append("certificate", fp, to_json(cert));
            result.certificates.push_back(std::move(cert));
        }
        summary["g"] = g;
        summary["certificates"] = result.certificates.size();
    } catch (const DomainError& e) {
        throw StageFailure("assemble", e.what());
    } catch (const BudgetExceeded& e) {
        throw StageFailure("assemble", e.what());
    }

    writer.append("report", fp, summary);
    result.summary = summary;
    return result;
}

ReportResult summarize_records(const std::string& records_path) {
    auto rr = read_records(records_path);
    ReportResult out;
    out.skipped = rr.skipped;
    std::ostringstream os;

    uint64_t certs = 0;
    std::map<std::string, uint64_t> by_class;
    for (const auto& r : rr.records) {
        if (r.kind == "sieve") {
            auto q = smooth_set_from_json(r.payload);
            os << "sieve: y=" << q.params.y << " theta=" << q.params.theta
               << " |Q|=" << q.primes.size() << " density=" << density_report(q) << "\n";
        } else if (r.kind == "modulus") {
            if (r.payload.contains("user") && r.payload.at("user").get<bool>()) {
                os << "modulus (user): " << r.payload.at("value").get<std::string>() << "\n";
            } else {
                auto m = modulus_from_json(r.payload.at("modulus"));
                os << "modulus: L=" << m.value.get_str() << " lambda=" << m.lambda.get_str();
                if (r.payload.contains("lambda_report")) {
                    const auto& lr = r.payload.at("lambda_report");
                    os << " lambda_bound_holds=" << lr.at("holds").get<bool>()
                       << " sum_1/(q-1)=" << lr.at("reciprocal_sum").get<double>();
                }
                os << "\n";
            }
        } else if (r.kind == "harvest") {
            auto pool = harvested_from_json(r.payload.at("pool"));
            os << "harvest: k0=" << r.payload.at("k0").get<std::string>()
               << " |pool|=" << pool.entries.size() << "\n";
            if (r.payload.contains("scan")) {
                os << "  k scan:";
                for (const auto& row : r.payload.at("scan"))
                    os << " " << row.at("k").get<std::string>() << ":"
                       << row.at("pool_size").get<uint64_t>();
                os << "\n";
            }
        } else if (r.kind == "extra_prime") {
            if (r.payload.at("included").get<bool>()) {
                auto ep = extra_prime_from_json(r.payload.at("extra"));
                os << "extra prime: k1=" << ep.k1.get_str() << " P=" << ep.p.get_str()
                   << " hb_ratio=" << ep.hb_ratio << "\n";
            } else {
                os << "extra prime: not required\n";
            }
        } else if (r.kind == "family") {
            auto fam = family_from_json(r.payload);
            os << "family: h=" << fam.h << " |C_h|=" << fam.sets.size() << "\n";
        } else if (r.kind == "certificate") {
            auto cert = certificate_from_json(r.payload);
            ++certs;
            ++by_class[to_string(cert.count_class)];
            os << "certificate: n=" << cert.n.get_str() << " factors=" << cert.factor_count
               << " class=" << to_string(cert.count_class) << "\n";
        } else if (r.kind == "report") {
            os << "run complete: " << r.payload.dump() << "\n";
        }
    }
    os << "certificates: " << certs;
    for (const auto& [cls, cnt] : by_class)
        os << " " << cls << "=" << cnt;
    os << "\n";
    if (out.skipped > 0)
        os << "warning: skipped " << out.skipped << " malformed record line(s)\n";
    out.text = os.str();
    return out;
}

} // namespace carmkit
