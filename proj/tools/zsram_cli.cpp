#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "zsram/coloring.hpp"
#include "zsram/egz.hpp"
#include "zsram/embed.hpp"
#include "zsram/forest.hpp"
#include "zsram/verify.hpp"

using json = nlohmann::ordered_json;

namespace {

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw zsram::Error(zsram::Errc::IoError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int default_jobs() {
    if (const char* env = std::getenv("ZSRAM_JOBS")) {
        int j = std::atoi(env);
        if (j > 0) return j;
    }
    return 1;
}

const char* class_name(zsram::ForestClass c) {
    switch (c) {
        case zsram::ForestClass::Type0: return "Type0";
        case zsram::ForestClass::Type1: return "Type1";
        case zsram::ForestClass::Type2: return "Type2";
    }
    return "?";
}

struct Output {
    bool as_json = false;
    bool quiet = false;
    json doc;

    void field(const std::string& k, json v) { doc[k] = std::move(v); }
    void line(const std::string& text) {
        if (!as_json && !quiet) std::cout << text << "\n";
    }
    void flush() {
        if (as_json) std::cout << doc.dump(2) << "\n";
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-sum Ramsey numbers of forests over Z3"};
    app.require_subcommand(1);
    bool opt_json = false, opt_quiet = false;
    app.add_flag("--json", opt_json, "machine-readable output");
    app.add_flag("--quiet", opt_quiet, "suppress human-readable output");

    std::string forest_path, coloring_path;
    std::uint64_t samples = 10'000;
    bool exhaustive = false;
    int nmax = -1;
    std::uint64_t seed = 1;
    int jobs = default_jobs();
    int egz_k = 3, egz_m = 3;
    std::string egz_terms;
    std::string out_path;

    auto* c_classify = app.add_subcommand("classify", "classify a forest and report its family");
    c_classify->add_option("forest", forest_path)->required();

    auto* c_ramsey = app.add_subcommand("ramsey", "evaluate the Ramsey number formula");
    c_ramsey->add_option("forest", forest_path)->required();

    auto* c_witness = app.add_subcommand("witness", "find a zero-sum copy in a coloring");
    c_witness->add_option("forest", forest_path)->required();
    c_witness->add_option("coloring", coloring_path)->required();

    auto* c_extremal = app.add_subcommand("extremal", "emit and certify the extremal coloring");
    c_extremal->add_option("forest", forest_path)->required();
    c_extremal->add_option("-o,--out", out_path, "write the coloring to this file");

    std::string cex_prefix;
    auto* c_verify = app.add_subcommand("verify", "check the formula against oracles");
    c_verify->add_option("forest", forest_path)->required();
    c_verify->add_flag("--exhaustive", exhaustive);
    c_verify->add_option("--samples", samples);
    c_verify->add_option("--nmax", nmax);
    c_verify->add_option("--seed", seed);
    c_verify->add_option("--jobs", jobs);
    c_verify->add_option("--cex-out", cex_prefix,
                         "write retained counterexample colorings to <prefix><N>.coloring");

    auto* c_egz = app.add_subcommand("egz", "zero-sum subsequence solver");
    c_egz->add_option("k", egz_k)->required();
    c_egz->add_option("m", egz_m)->required();
    c_egz->add_option("residues", egz_terms)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Output out;
    out.as_json = opt_json;
    out.quiet = opt_quiet;

    try {
        if (c_classify->parsed()) {
            auto f = zsram::parse_forest(slurp(forest_path));
            auto cls = zsram::classify_forest(f);
            auto fam = zsram::recognize_family(f);
            auto prof = zsram::degree_profile(f);
            out.field("class", class_name(cls));
            out.field("family", zsram::family_name(fam.kind));
            out.field("family_params", fam.params);
            out.field("vertices", f.n);
            out.field("edges", f.edge_count());
            out.field("degrees_mod3", prof.counts_mod3);
            out.field("canonical", zsram::canonical_form(f));
            std::ostringstream ss;
            ss << class_name(cls) << " " << zsram::family_name(fam.kind) << "(";
            for (size_t i = 0; i < fam.params.size(); ++i)
                ss << (i ? "," : "") << fam.params[i];
            ss << "), n=" << f.n << ", e=" << f.edge_count();
            out.line(ss.str());
            out.flush();
            return 0;
        }
        if (c_ramsey->parsed()) {
            auto f = zsram::parse_forest(slurp(forest_path));
            auto r = zsram::ramsey_formula(f);
            out.field("value", r.value);
            out.field("class", class_name(r.cls));
            out.field("case", r.formula_case);
            out.line("R = " + std::to_string(r.value) + " (" + class_name(r.cls) + ": " +
                     r.formula_case + ")");
            out.flush();
            return 0;
        }
        if (c_witness->parsed()) {
            auto f = zsram::parse_forest(slurp(forest_path));
            auto chi = zsram::parse_coloring(slurp(coloring_path));
            auto r = zsram::find_zero_sum_copy(f, chi);
            if (!r) {
                out.field("found", false);
                out.line("no zero-sum copy");
                out.flush();
                return 1;
            }
            out.field("found", true);
            out.field("strategy", zsram::strategy_name(r->second.kind));
            if (!r->second.detail.empty()) out.field("strategy_detail", r->second.detail);
            out.field("map", r->first.map);
            out.field("sum", 0);
            std::ostringstream ss;
            ss << "zero-sum copy via " << zsram::strategy_name(r->second.kind) << ": [";
            for (size_t i = 0; i < r->first.map.size(); ++i)
                ss << (i ? " " : "") << r->first.map[i];
            ss << "]";
            out.line(ss.str());
            out.flush();
            return 0;
        }
        if (c_extremal->parsed()) {
            auto f = zsram::parse_forest(slurp(forest_path));
            auto w = zsram::witness_lower_bound(f);
            std::string text = zsram::write_coloring(w.coloring);
            if (!out_path.empty()) {
                std::ofstream o(out_path);
                o << text;
            }
            out.field("host", w.coloring.n);
            out.field("shows_r_greater_than", w.shows_r_greater_than);
            out.field("certified", w.certified);
            if (out_path.empty() && !opt_json && !opt_quiet) std::cout << text;
            out.line("R > " + std::to_string(w.shows_r_greater_than) +
                     (w.certified ? " certified by complete enumeration" : " NOT certified"));
            out.flush();
            return w.certified ? 0 : 1;
        }
        if (c_verify->parsed()) {
            auto f = zsram::parse_forest(slurp(forest_path));
            zsram::VerifyOptions opts;
            opts.exhaustive = exhaustive;
            opts.samples = samples;
            opts.n_max = nmax;
            opts.seed = seed;
            opts.jobs = jobs;
            auto rep = zsram::verify_forest(f, opts);
            if (!cex_prefix.empty()) {
                for (auto& [N, coloring] : rep.counterexamples) {
                    std::ofstream o(cex_prefix + std::to_string(N) + ".coloring");
                    o << zsram::write_coloring(coloring);
                }
            }
            out.field("forest", rep.forest_canonical);
            out.field("formula_value", rep.formula_value);
            out.field("formula_case", rep.formula_case);
            if (rep.oracle_value) out.field("oracle_value", *rep.oracle_value);
            out.field("lower_witness_applicable", rep.lower_witness_applicable);
            out.field("lower_witness_ok", rep.lower_witness_ok);
            if (rep.upper_bound_ok) out.field("upper_bound_ok", *rep.upper_bound_ok);
            out.field("upper_verdict", rep.upper_verdict);
            out.field("states_explored", rep.states_explored);
            out.field("seed", rep.seed);
            if (rep.samples) {
                out.field("samples", rep.samples);
                out.field("sample_failures", rep.sample_failures);
            }
            std::ostringstream ss;
            ss << "R_formula = " << rep.formula_value << " [" << rep.upper_verdict << "]";
            if (rep.oracle_value) ss << " oracle = " << *rep.oracle_value;
            ss << " lower_ok=" << (rep.lower_witness_ok ? "yes" : "no");
            if (rep.upper_bound_ok) ss << " upper_ok=" << (*rep.upper_bound_ok ? "yes" : "no");
            ss << " (" << rep.elapsed_seconds << "s)";
            out.line(ss.str());
            out.flush();
            bool ok = rep.lower_witness_ok && rep.upper_bound_ok.value_or(false);
            return ok ? 0 : 1;
        }
        if (c_egz->parsed()) {
            std::vector<int> terms;
            std::stringstream ss(egz_terms);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                if (!tok.empty()) terms.push_back(std::stoi(tok));
            }
            zsram::ResidueSequence seq(egz_k, terms);
            auto pick = zsram::egz_find(seq, egz_m);
            if (pick) {
                out.field("found", true);
                out.field("indices", *pick);
                std::ostringstream os;
                os << "zero-sum subsequence at indices";
                for (int i : *pick) os << " " << i;
                out.line(os.str());
                out.flush();
                return 0;
            }
            out.field("found", false);
            bool extremal_confirmed = false;
            if (seq.size() == egz_m + egz_k - 2)
                extremal_confirmed = zsram::egz_extremal_check(seq, egz_m);
            out.field("extremal_structure", extremal_confirmed);
            out.line(extremal_confirmed
                         ? "no zero-sum subsequence; extremal structure confirmed"
                         : "no zero-sum subsequence");
            out.flush();
            return 1;
        }
    } catch (const zsram::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
