// carmkit command line: each pipeline stage as a subcommand, plus the
// end-to-end `pipeline` driver and the `report` summarizer.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "carmkit/pipeline.hpp"

namespace ck = carmkit;
using ck::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitStageFailure = 3;
constexpr int kExitVerificationFailure = 4;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ck::DomainError("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump() << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out)
            throw ck::DomainError("cannot open " + out_path + " for writing");
        out << j.dump() << "\n";
    }
}

std::vector<ck::Natural> parse_naturals(const std::string& csv) {
    std::vector<ck::Natural> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.emplace_back(item);
    return out;
}

std::vector<uint64_t> parse_u64s(const std::string& csv) {
    std::vector<uint64_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(std::stoull(item));
    return out;
}

ck::Modulus modulus_from_file(const std::string& path) {
    json j = load_json(path);
    if (j.contains("modulus"))
        j = j.at("modulus");
    return ck::modulus_from_json(j);
}

ck::HarvestedPrimes pool_from_file(const std::string& path) {
    json j = load_json(path);
    if (j.contains("pool"))
        j = j.at("pool");
    return ck::harvested_from_json(j);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Carmichael number construction pipeline"};
    app.require_subcommand(1);

    // sieve
    uint64_t y = 10;
    double theta = 1.5;
    std::string out_path;
    auto* sieve_cmd = app.add_subcommand("sieve", "Build the smooth-shifted prime set Q(y, theta)");
    sieve_cmd->add_option("--y", y, "smoothness bound y")->required();
    sieve_cmd->add_option("--theta", theta, "interval exponent, in (1, 2)")->required();
    sieve_cmd->add_option("--out", out_path, "output file (default stdout)");

    // build-l
    std::string from_path, exclude_csv;
    ck::Natural prune_x = 0;
    uint64_t prune_samples = 0;
    double b_exponent = 5.0 / 12.0;
    uint64_t seed = 1;
    auto* buildl_cmd = app.add_subcommand("build-l", "Assemble L from a sieve output");
    buildl_cmd->add_option("--from", from_path, "sieve output file")->required();
    buildl_cmd->add_option("--exclude", exclude_csv, "comma-separated primes to drop");
    buildl_cmd->add_option("--prune-x", prune_x, "x bound for exceptional-divisor pruning");
    buildl_cmd->add_option("--prune-samples", prune_samples, "divisors to sample when pruning");
    buildl_cmd->add_option("--b", b_exponent, "B exponent for the divisor cap x^B");
    buildl_cmd->add_option("--seed", seed, "sampling seed");
    buildl_cmd->add_option("--out", out_path, "output file (default stdout)");

    // harvest
    std::string l_path;
    ck::Natural k_min = 1, k_max = 50, cap = 1'000'000, x_bound = 0, k0 = 1;
    auto* harvest_cmd = app.add_subcommand("harvest", "Scan k for the richest pool P_k");
    harvest_cmd->add_option("--l", l_path, "modulus file from build-l")->required();
    harvest_cmd->add_option("--k-min", k_min, "k range start");
    harvest_cmd->add_option("--k-max", k_max, "k range end");
    harvest_cmd->add_option("--cap", cap, "divisor cap");
    harvest_cmd->add_option("--x-bound", x_bound, "upper bound on harvested primes (0 = none)");
    harvest_cmd->add_option("--out", out_path, "output file (default stdout)");

    // extra-prime
    ck::Natural k1_max = 0;
    auto* extra_cmd = app.add_subcommand("extra-prime", "Minimal k1 with L*k0*k1 + 1 prime");
    extra_cmd->add_option("--l", l_path, "modulus file from build-l")->required();
    extra_cmd->add_option("--k0", k0, "the selected k0")->required();
    extra_cmd->add_option("--k1-max", k1_max, "search ceiling (0 = default)");
    extra_cmd->add_option("--out", out_path, "output file (default stdout)");

    // hb-gauge
    uint64_t d_max = 1000, residue = 1;
    bool full_table = false;
    auto* hb_cmd = app.add_subcommand("hb-gauge", "Least-prime-in-progression ratio table");
    hb_cmd->add_option("--d-max", d_max, "largest modulus d")->required();
    hb_cmd->add_option("--residue", residue, "residue class (default 1)");
    hb_cmd->add_flag("--table", full_table, "emit the full per-d table");
    hb_cmd->add_option("--out", out_path, "output file (default stdout)");

    // zerosum
    std::string pool_path;
    ck::Natural zs_modulus = 0;
    uint64_t h_min = 1, h_max = 8, target_count = 32;
    bool disjoint = false;
    auto* zs_cmd = app.add_subcommand("zerosum", "Subsets with product 1 mod M");
    zs_cmd->add_option("--pool", pool_path, "pool file from harvest")->required();
    zs_cmd->add_option("--modulus", zs_modulus, "working modulus M")->required();
    zs_cmd->add_option("--h-min", h_min, "smallest subset size");
    zs_cmd->add_option("--h-max", h_max, "largest subset size");
    zs_cmd->add_option("--count", target_count, "sets to collect per h");
    zs_cmd->add_flag("--disjoint", disjoint, "greedily extract a pairwise-disjoint subfamily");
    zs_cmd->add_option("--out", out_path, "output file (default stdout)");

    // davenport
    std::string cyclic_csv;
    auto* dav_cmd = app.add_subcommand("davenport", "Davenport constant of a small abelian group");
    dav_cmd->add_option("--cyclic", cyclic_csv, "cyclic orders, e.g. 2,2 or 5")->required();

    // agp-check
    uint64_t agp_r = 9, agp_t = 4, agp_trials = 100;
    auto* agp_cmd = app.add_subcommand("agp-check", "Subsequence-counting bound check");
    agp_cmd->add_option("--cyclic", cyclic_csv, "cyclic orders of the group")->required();
    agp_cmd->add_option("--r", agp_r, "sequence length")->required();
    agp_cmd->add_option("--t", agp_t, "upper subsequence length")->required();
    agp_cmd->add_option("--trials", agp_trials, "random sequences to test");
    agp_cmd->add_option("--seed", seed, "RNG seed");

    // assemble
    std::string family_path, extra_path, class_name = "none";
    uint64_t g_arg = 0, h_arg = 0, g_max = 100'000;
    auto* asm_cmd = app.add_subcommand("assemble", "Combine zero-sum sets into a certificate");
    asm_cmd->add_option("--family", family_path, "zerosum output file")->required();
    asm_cmd->add_option("--g", g_arg, "number of disjoint sets (0 = derive from --class)");
    asm_cmd->add_option("--set-size", h_arg, "family h to use (0 = first nonempty)");
    asm_cmd->add_option("--extra", extra_path, "extra-prime output file");
    asm_cmd->add_option("--class", class_name, "prime|square|cube|power|none");
    asm_cmd->add_option("--g-max", g_max, "prime-class search ceiling for g");
    asm_cmd->add_option("--out", out_path, "output file (default stdout)");

    // verify
    std::string factors_csv;
    auto* verify_cmd = app.add_subcommand("verify", "Korselt check of a factor list");
    verify_cmd->add_option("--factors", factors_csv, "comma-separated prime factors")->required();

    // chernick
    uint64_t chernick_k_max = 1000;
    auto* ch_cmd = app.add_subcommand("chernick", "Chernick triples 6k+1, 12k+1, 18k+1");
    ch_cmd->add_option("--k-max", chernick_k_max, "largest k to scan")->required();
    ch_cmd->add_option("--out", out_path, "output file (default stdout)");

    // pipeline
    std::string config_path, records_path = "carmkit-records.jsonl";
    std::string pool_csv, user_modulus_str;
    std::string pl_class;
    uint64_t pl_y = 0, pl_seed = 0, pl_hmin = 0, pl_hmax = 0;
    double pl_theta = 0.0;
    auto* pl_cmd = app.add_subcommand("pipeline", "Run every stage end to end");
    pl_cmd->add_option("--config", config_path, "config JSON file");
    pl_cmd->add_option("--records", records_path, "record stream (JSONL, append-only)");
    pl_cmd->add_option("--modulus", user_modulus_str, "inject a user modulus, skipping sieve/L");
    pl_cmd->add_option("--pool", pool_csv, "inject a comma-separated prime pool");
    pl_cmd->add_option("--class", pl_class, "count class: prime|square|cube|power|none");
    pl_cmd->add_option("--y", pl_y, "override sieve y");
    pl_cmd->add_option("--theta", pl_theta, "override sieve theta");
    pl_cmd->add_option("--h-min", pl_hmin, "override h range start");
    pl_cmd->add_option("--h-max", pl_hmax, "override h range end");
    pl_cmd->add_option("--seed", pl_seed, "override RNG seed");

    // report
    auto* report_cmd = app.add_subcommand("report", "Summarize a record stream");
    report_cmd->add_option("--records", records_path, "record stream to read")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sieve_cmd->parsed()) {
            auto q = ck::build_Q({y, theta});
            json j = ck::to_json(q);
            j["density_ratio"] = ck::density_report(q);
            emit(j, out_path);
        } else if (buildl_cmd->parsed()) {
            auto q = ck::smooth_set_from_json(load_json(from_path));
            auto ex = parse_naturals(exclude_csv);
            auto l = ck::assemble_L(q, {ex.begin(), ex.end()});
            json j;
            if (prune_x != 0 && prune_samples > 0) {
                ck::PruneOptions popts;
                popts.b_exponent = b_exponent;
                popts.seed = seed;
                auto [pruned, log] = ck::prune_exceptional(l, prune_x, prune_samples, popts);
                l = pruned;
                json removals = json::array();
                for (const auto& r : log.removals)
                    removals.push_back({{"divisor", ck::natural_to_json(r.divisor)},
                                        {"removed_prime", ck::natural_to_json(r.removed_prime)},
                                        {"ap_count", r.ap_count},
                                        {"threshold", r.threshold}});
                j["prune"] = {{"divisors_sampled", log.divisors_sampled}, {"removals", removals}};
            }
            j["modulus"] = ck::to_json(l);
            j["lambda_report"] = ck::to_json(ck::lambda_bound_check(l, q.params));
            emit(j, out_path);
        } else if (harvest_cmd->parsed()) {
            auto l = modulus_from_file(l_path);
            auto sel = ck::select_k0(l, k_min, k_max, cap, x_bound);
            json scan = json::array();
            for (const auto& row : sel.scan)
                scan.push_back({{"k", ck::natural_to_json(row.k)}, {"pool_size", row.pool_size}});
            emit({{"k0", ck::natural_to_json(sel.k0)},
                  {"pool", ck::to_json(sel.pool)},
                  {"scan", scan}},
                 out_path);
        } else if (extra_cmd->parsed()) {
            auto l = modulus_from_file(l_path);
            auto ep = ck::find_k1(l, k0, k1_max);
            emit(ck::to_json(ep), out_path);
        } else if (hb_cmd->parsed()) {
            auto rep = ck::heathbrown_gauge(d_max, residue);
            json j = ck::to_json(rep);
            if (!full_table)
                j.erase("table");
            emit(j, out_path);
        } else if (zs_cmd->parsed()) {
            auto pool = pool_from_file(pool_path);
            auto families =
                ck::find_zero_sum_sets(pool, zs_modulus, h_min, h_max, target_count, disjoint);
            json fams = json::array();
            for (const auto& [h, fam] : families) {
                (void)h;
                fams.push_back(ck::to_json(fam));
            }
            emit({{"families", fams}}, out_path);
        } else if (dav_cmd->parsed()) {
            ck::GroupSpec g{parse_u64s(cyclic_csv)};
            uint64_t exact = ck::davenport_bruteforce(g);
            ck::Natural bound = ck::davenport_bound(g.exponent(), g.order());
            emit({{"cyclic_orders", g.cyclic_orders},
                  {"exact", exact},
                  {"ek_meshulam_bound", ck::natural_to_json(bound)}},
                 "");
        } else if (agp_cmd->parsed()) {
            ck::GroupSpec g{parse_u64s(cyclic_csv)};
            auto rep = ck::agp_count_check(g, agp_r, agp_t, agp_trials, seed);
            emit(ck::to_json(rep), "");
            if (rep.violations > 0)
                return kExitVerificationFailure;
        } else if (asm_cmd->parsed()) {
            json fams = load_json(family_path).at("families");
            auto cls = ck::count_class_from_string(class_name);
            if (!cls)
                throw ck::DomainError("unknown count class " + class_name);
            std::optional<ck::ZeroSumFamily> fam;
            for (const auto& fj : fams) {
                auto f = ck::family_from_json(fj);
                if (f.sets.empty())
                    continue;
                if (h_arg == 0 || f.h == h_arg) {
                    fam = std::move(f);
                    break;
                }
            }
            if (!fam)
                throw ck::DomainError("no nonempty family in " + family_path);
            std::optional<ck::ExtraPrime> extra;
            if (!extra_path.empty())
                extra = ck::extra_prime_from_json(load_json(extra_path));
            uint64_t g = g_arg != 0 ? g_arg : ck::find_g0(fam->h, *cls, g_max);
            if (g > fam->sets.size())
                throw ck::DomainError("family has only " + std::to_string(fam->sets.size()) +
                                      " sets, need " + std::to_string(g));
            std::vector<std::vector<ck::Natural>> sets(fam->sets.begin(), fam->sets.begin() + g);
            ck::Natural m = fam->modulus;
            if (extra)
                m = extra->modulus_base * extra->k1;
            auto cert = ck::assemble_carmichael(sets, extra, m);
            emit(ck::to_json(cert), out_path);
            if (*cls != ck::CountClass::none && cert.count_class != *cls) {
                std::cerr << "count class is " << ck::to_string(cert.count_class)
                          << ", requested " << ck::to_string(*cls) << "\n";
                return kExitVerificationFailure;
            }
        } else if (verify_cmd->parsed()) {
            auto rep = ck::verify_korselt(parse_naturals(factors_csv));
            emit(ck::to_json(rep), "");
            if (!rep.ok)
                return kExitVerificationFailure;
        } else if (ch_cmd->parsed()) {
            auto certs = ck::chernick_search(chernick_k_max);
            json arr = json::array();
            for (const auto& c : certs)
                arr.push_back(ck::to_json(c));
            emit({{"k_max", chernick_k_max}, {"certificates", arr}}, out_path);
        } else if (pl_cmd->parsed()) {
            ck::PipelineConfig config;
            if (!config_path.empty())
                config = ck::config_from_json(load_json(config_path));
            if (!user_modulus_str.empty())
                config.user_modulus = ck::Natural(user_modulus_str);
            if (!pool_csv.empty())
                config.user_pool = parse_naturals(pool_csv);
            if (!pl_class.empty()) {
                auto cls = ck::count_class_from_string(pl_class);
                if (!cls)
                    throw ck::DomainError("unknown count class " + pl_class);
                config.count_class = *cls;
            }
            if (pl_y != 0)
                config.y = pl_y;
            if (pl_theta != 0.0)
                config.theta = pl_theta;
            if (pl_hmin != 0)
                config.h_min = pl_hmin;
            if (pl_hmax != 0)
                config.h_max = pl_hmax;
            if (pl_seed != 0)
                config.seed = pl_seed;
            auto result = ck::run_pipeline(config, records_path);
            json certs = json::array();
            for (const auto& c : result.certificates)
                certs.push_back(ck::to_json(c));
            emit({{"certificates", certs}, {"summary", result.summary}}, "");
        } else if (report_cmd->parsed()) {
            auto rep = ck::summarize_records(records_path);
            std::cout << rep.text;
            if (rep.skipped > 0)
                return 1;
        }
    } catch (const ck::StageFailure& e) {
        std::cout << e.machine_readable().dump() << "\n";
        return kExitStageFailure;
    } catch (const ck::DomainError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const ck::BudgetExceeded& e) {
        std::cerr << "search failed: " << e.what() << "\n";
        return kExitStageFailure;
    } catch (const ck::InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitVerificationFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    }
    return kExitOk;
}
