// Command-line front end. The whole app runs through cli::run() so tests can
// drive it in-process; tools/polarbd_main.cpp is a thin wrapper.
//
// Exit codes: 0 success, 1 usage error, 2 config/file error. Errors go to
// stderr as a single line with a machine-parsable prefix:
//   error[usage]: ...
//   error[config]: ...
#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "polarbd/blind_detection.hpp"
#include "polarbd/channel.hpp"
#include "polarbd/construction.hpp"
#include "polarbd/latency_model.hpp"
#include "polarbd/sc_decoder.hpp"
#include "polarbd/scl_decoder.hpp"
#include "polarbd/sim_harness.hpp"
#include "polarbd/util.hpp"

namespace polarbd::cli {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;

// Relative output paths are resolved against POLARBD_OUT_DIR when it is set.
inline std::filesystem::path resolve_output_path(const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("POLARBD_OUT_DIR"); dir && *dir)
            return std::filesystem::path(dir) / p;
    }
    return p;
}

inline void emit(const std::string& text, const std::optional<std::string>& out_path, std::ostream& out) {
    if (out_path)
        write_file_atomic(resolve_output_path(*out_path), text);
    else
        out << text;
}

inline std::string run_manifest_json(std::uint64_t seed, const std::string& config_text,
                                     const std::vector<ExperimentConfig>& experiments) {
    nlohmann::json j;
    j["tool"] = "polarbd";
    j["version"] = kVersion;
    j["seed"] = seed;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(config_text)));
    j["config_hash"] = hash;
    auto names = nlohmann::json::array();
    for (const auto& e : experiments) names.push_back(e.name);
    j["experiments"] = names;
    return j.dump(2) + "\n";
}

// LLR dump format for `detect`: each candidate is two lines, a header
// `N K rnti_mode [design_param]` followed by N whitespace-separated LLRs.
inline std::vector<CandidateSlot> parse_llr_dump(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::vector<CandidateSlot> slots;
    std::map<std::string, std::shared_ptr<const PolarCodeSpec>> spec_cache;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream hs(line);
        int n = 0, k = 0;
        std::string mode;
        double design_param = 0.5;
        if (!(hs >> n >> k >> mode))
            throw std::invalid_argument("llr dump line " + std::to_string(lineno) +
                                        ": expected header 'N K rnti_mode [design_param]'");
        hs >> design_param;

        const std::string key = std::to_string(n) + ":" + std::to_string(k) + ":" + mode + ":" +
                                std::to_string(design_param);
        auto it = spec_cache.find(key);
        if (it == spec_cache.end()) {
            auto spec = std::make_shared<PolarCodeSpec>(
                make_code_spec(n, k, 16, rnti_mode_from_string(mode), design_param));
            it = spec_cache.emplace(key, std::move(spec)).first;
        }

        if (!std::getline(is, line))
            throw std::invalid_argument("llr dump: missing LLR line after header at line " +
                                        std::to_string(lineno));
        ++lineno;
        std::istringstream ls(line);
        LlrVec llrs;
        double v;
        while (ls >> v) llrs.push_back(v);
        if (static_cast<int>(llrs.size()) != n)
            throw std::invalid_argument("llr dump line " + std::to_string(lineno) + ": expected " +
                                        std::to_string(n) + " LLRs, got " + std::to_string(llrs.size()));
        CandidateSlot slot;
        slot.index = static_cast<int>(slots.size());
        slot.spec = it->second;
        slot.llrs = std::move(llrs);
        slots.push_back(std::move(slot));
    }
    if (slots.empty()) throw std::invalid_argument("llr dump contains no candidates");
    return slots;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"polar-code blind-detection toolkit"};
    app.require_subcommand(1);

    // construct
    auto* c_construct = app.add_subcommand("construct", "build and print a polar code spec");
    int c_n = 128, c_k = 57, c_rnti_len = 16;
    std::string c_mode = "rm1";
    double c_design = 0.5;
    std::optional<std::string> c_out;
    c_construct->add_option("--n", c_n, "code length (power of two)");
    c_construct->add_option("--k", c_k, "information length");
    c_construct->add_option("--rnti-len", c_rnti_len, "RNTI length in bits");
    c_construct->add_option("--rnti-mode", c_mode, "rm1|rm2|rm3");
    c_construct->add_option("--design-param", c_design, "BEC erasure probability for construction");
    c_construct->add_option("--out", c_out, "write spec file instead of stdout");

    // encode
    auto* c_encode = app.add_subcommand("encode", "encode one message");
    std::string e_spec, e_info, e_rnti;
    std::optional<std::string> e_out;
    c_encode->add_option("--spec", e_spec, "spec file from `construct`")->required();
    c_encode->add_option("--info", e_info, "info bits (01 string or 0x hex)")->required();
    c_encode->add_option("--rnti", e_rnti, "RNTI bits (01 string or 0x hex)")->required();
    c_encode->add_option("--out", e_out, "output file");

    // decode
    auto* c_decode = app.add_subcommand("decode", "decode one LLR vector");
    std::string d_spec, d_llr_file;
    int d_list = 1;
    std::optional<std::string> d_out;
    c_decode->add_option("--spec", d_spec, "spec file")->required();
    c_decode->add_option("--llr-file", d_llr_file, "file with N whitespace-separated LLRs")->required();
    c_decode->add_option("--list", d_list, "list size (1 = SC)");
    c_decode->add_option("--out", d_out, "output file");

    // detect
    auto* c_detect = app.add_subcommand("detect", "one blind-detection round from an LLR dump");
    std::string t_dump, t_rnti;
    int t_c2 = 7, t_list = 8;
    bool t_early = false;
    std::optional<std::string> t_out;
    c_detect->add_option("--dump", t_dump, "candidate LLR dump file")->required();
    c_detect->add_option("--ue-rnti", t_rnti, "UE RNTI (01 string or 0x hex)")->required();
    c_detect->add_option("--c2", t_c2, "stage-2 candidate count");
    c_detect->add_option("--list", t_list, "SCL list size");
    c_detect->add_flag("--early-stop", t_early, "enable RNTI early stopping");
    c_detect->add_option("--out", t_out, "output file");

    // simulate
    auto* c_sim = app.add_subcommand("simulate", "run experiments from a config file");
    std::string s_config;
    std::optional<std::uint64_t> s_seed;
    std::optional<std::string> s_out, s_manifest;
    int s_threads = static_cast<int>(std::thread::hardware_concurrency());
    c_sim->add_option("--config", s_config, "experiment config file")->required();
    c_sim->add_option("--seed", s_seed, "override the seed of every experiment");
    c_sim->add_option("--out", s_out, "CSV output file (default stdout)");
    c_sim->add_option("--manifest", s_manifest, "write a JSON run manifest");
    c_sim->add_option("--threads", s_threads, "worker threads");

    // latency
    auto* c_lat = app.add_subcommand("latency", "evaluate the detection latency model");
    std::string l_pair = "sc-scl";
    double l_f = 800.0;
    int l_nsc = 22, l_nscl = 7, l_c1 = 44, l_c2 = 7;
    int l_n1 = 512, l_k1 = 57, l_n2 = 256, l_k2 = 57;
    std::optional<long> l_tsort;
    bool l_presets = false;
    std::optional<std::string> l_out;
    c_lat->add_option("--pair", l_pair, "sc-scl|fastssc-sscl|fastssc-fastsscl-l2");
    c_lat->add_option("--f", l_f, "clock frequency in MHz");
    c_lat->add_option("--nsc", l_nsc, "parallel stage-1 decoders");
    c_lat->add_option("--nscl", l_nscl, "parallel stage-2 decoders");
    c_lat->add_option("--c1", l_c1, "stage-1 candidate count");
    c_lat->add_option("--c2", l_c2, "stage-2 candidate count");
    c_lat->add_option("--n1", l_n1, "first code length");
    c_lat->add_option("--k1", l_k1, "first code dimension");
    c_lat->add_option("--n2", l_n2, "second code length");
    c_lat->add_option("--k2", l_k2, "second code dimension");
    c_lat->add_option("--tsort", l_tsort, "sorting steps (default C2)");
    c_lat->add_flag("--sweep-presets", l_presets, "report the full preset table");
    c_lat->add_option("--out", l_out, "output file");

    std::vector<const char*> argv;
    argv.push_back("polarbd");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error[usage]: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (c_construct->parsed()) {
            const PolarCodeSpec spec = make_code_spec(c_n, c_k, c_rnti_len,
                                                      rnti_mode_from_string(c_mode), c_design);
            emit(spec_to_text(spec), c_out, out);
            return kExitOk;
        }
        if (c_encode->parsed()) {
            const PolarCodeSpec spec = spec_from_text(read_file(e_spec));
            MessageWord msg{parse_bits(e_info, static_cast<std::size_t>(spec.k_info)),
                            parse_bits(e_rnti, static_cast<std::size_t>(spec.rnti_len))};
            const Codeword cw = encode(spec, msg);
            std::ostringstream os;
            os << "codeword_bits " << bits_to_string(cw.bits) << "\n";
            os << "codeword_hex " << bits_to_hex(cw.bits) << "\n";
            emit(os.str(), e_out, out);
            return kExitOk;
        }
        if (c_decode->parsed()) {
            const PolarCodeSpec spec = spec_from_text(read_file(d_spec));
            std::istringstream ls(read_file(d_llr_file));
            LlrVec y;
            double v;
            while (ls >> v) y.push_back(v);
            std::ostringstream os;
            if (d_list <= 1) {
                const ScResult sc = sc_decode(spec, y);
                os << "info_bits " << bits_to_string(extract_info(spec, sc.u_hat)) << "\n";
                os << "info_hex " << bits_to_hex(extract_info(spec, sc.u_hat)) << "\n";
                os << "rnti_hex " << bits_to_hex(sc.rnti_hat) << "\n";
                os << "pm " << format_double(sc.pm) << "\n";
            } else {
                const SclResult scl = scl_decode(spec, y, d_list);
                const auto& best = scl.paths.front();
                os << "info_bits " << bits_to_string(extract_info(spec, best.u_hat)) << "\n";
                os << "info_hex " << bits_to_hex(extract_info(spec, best.u_hat)) << "\n";
                os << "rnti_hex " << bits_to_hex(extract_rnti(spec, best.u_hat)) << "\n";
                os << "pm " << format_double(best.pm) << "\n";
            }
            emit(os.str(), d_out, out);
            return kExitOk;
        }
        if (c_detect->parsed()) {
            std::vector<CandidateSlot> slots = parse_llr_dump(read_file(t_dump));
            const int rnti_len = slots.front().spec->rnti_len;
            const BitVec ue = parse_bits(t_rnti, static_cast<std::size_t>(rnti_len));
            const DetectionOutcome res = detect(slots, ue, t_c2, t_list, t_early);
            std::ostringstream os;
            os << "candidates " << slots.size() << "\n";
            os << "stage2_set";
            for (int idx : res.stage2_set) os << ' ' << idx;
            os << "\n";
            if (res.selected) {
                os << "selected " << *res.selected << "\n";
                os << "payload_bits " << bits_to_string(*res.selected_payload) << "\n";
                os << "payload_hex " << bits_to_hex(*res.selected_payload) << "\n";
            } else {
                os << "selected none\n";
            }
            emit(os.str(), t_out, out);
            return kExitOk;
        }
        if (c_sim->parsed()) {
            const std::string config_text = read_file(s_config);
            std::vector<ExperimentConfig> experiments = parse_experiment_configs(config_text);
            if (s_seed)
                for (auto& e : experiments) e.seed = *s_seed;
            std::vector<std::pair<std::string, SimStats>> runs;
            for (const auto& e : experiments)
                runs.emplace_back(e.name, run_experiment(e, std::max(1, s_threads)));
            emit(stats_to_csv(runs), s_out, out);
            if (s_manifest)
                write_file_atomic(resolve_output_path(*s_manifest),
                                  run_manifest_json(s_seed.value_or(experiments.front().seed),
                                                    config_text, experiments));
            return kExitOk;
        }
        if (c_lat->parsed()) {
            std::vector<LatencyRow> rows;
            if (l_presets) {
                for (const auto& cfg : preset_latency_configs(l_c2)) rows.push_back(evaluate_latency(cfg));
            } else {
                LatencyConfig cfg;
                cfg.algo_pair = algo_pair_from_string(l_pair);
                cfg.f_mhz = l_f;
                cfg.n_sc = l_nsc;
                cfg.n_scl = l_nscl;
                cfg.c1 = l_c1;
                cfg.c2 = l_c2;
                cfg.n1 = l_n1;
                cfg.k1 = l_k1;
                cfg.n2 = l_n2;
                cfg.k2 = l_k2;
                cfg.t_sort = l_tsort;
                rows.push_back(evaluate_latency(cfg));
            }
            emit(latency_report_csv(rows), l_out, out);
            return kExitOk;
        }
        err << "error[usage]: no subcommand\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error[config]: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error[config]: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace polarbd::cli
