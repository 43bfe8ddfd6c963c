// Command-line front end: Monte Carlo sweeps, result plotting, and the
// exhaustive-MAP agreement check for the joint decoder.

#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccresm/exhaustive.hpp"
#include "ccresm/plot.hpp"
#include "ccresm/sim.hpp"

namespace {

using ccresm::Scheme;

// "a,b,c" or "start:step:stop" (inclusive stop, within half a step).
std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double start = 0, step = 0, stop = 0;
        char extra = 0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &start, &step, &stop, &extra) != 3 ||
            step <= 0)
            throw CLI::ValidationError("expected start:step:stop with step > 0, got '" + text +
                                       "'");
        for (double v = start; v <= stop + step * 0.5; v += step) out.push_back(v);
        return out;
    }
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        if (pos != item.size()) throw CLI::ValidationError("bad number '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw CLI::ValidationError("empty value list '" + text + "'");
    return out;
}

// Flat key=value file with the same keys as the long option names.  '#'
// starts a comment.
std::map<std::string, std::string> read_flat_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected key=value");
        auto trim = [](std::string s) {
            const std::size_t b = s.find_first_not_of(" \t\r");
            const std::size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty key");
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::vector<Scheme> parse_schemes(const std::string& text) {
    std::vector<Scheme> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        const auto s = ccresm::scheme_from_name(item);
        if (!s)
            throw CLI::ValidationError(
                "unknown scheme '" + item +
                "' (expected ccresm, turbo_sic, independent or single_user)");
        out.push_back(*s);
    }
    if (out.empty()) throw CLI::ValidationError("no schemes given");
    return out;
}

int run_decode_oracle(int n_bits, int trials, double snr_db, double delta, int q, int iters,
                      std::uint64_t seed) {
    using namespace ccresm;
    if (n_bits < 1 || n_bits > 8)
        throw std::invalid_argument("decode-oracle: N must be in [1, 8] (exhaustive enumeration)");
    if (trials < 1) throw std::invalid_argument("decode-oracle: trials must be >= 1");

    const double sigma2 = snr_to_sigma2(snr_db);
    int joint_agree = 0;
    int single_agree = 0;
    for (int t = 0; t < trials; ++t) {
        SplitRng rng(seed, 0x6f7261636cULL, static_cast<std::uint64_t>(t));
        const BitVector sa = random_bits(static_cast<std::size_t>(n_bits), rng);
        const BitVector sb = random_bits(static_cast<std::size_t>(n_bits), rng);
        const RaConfig cfg_a{n_bits, q, build_interleaver(n_bits, q, rng.next_u64())};
        const RaConfig cfg_b{n_bits, q, build_interleaver(n_bits, q, rng.next_u64())};
        const ChannelConfig chan{delta, sigma2, cfg_a.n(), false};
        const SampleFrame frame =
            overlap_and_sample(ra_encode(sa, cfg_a), ra_encode(sb, cfg_b), chan, rng);

        const auto ev = compute_evidence(frame, chan);
        const VirtualGraph g = build_virtual_graph(cfg_a, cfg_b);
        const DecodeResult bp = decode(ev, g, iters);
        const JointMapResult map = joint_map_decode(frame, chan, cfg_a, cfg_b);
        joint_agree += (bp.sa_hat == map.sa && bp.sb_hat == map.sb);

        const auto r_single = awgn_sample(ra_encode(sa, cfg_a), sigma2, rng);
        const BitVector bp_single =
            ra_decode_single(bit_evidence(r_single, sigma2), cfg_a, iters);
        single_agree += (bp_single == single_user_map_decode(r_single, sigma2, cfg_a));
    }

    const double joint_rate = static_cast<double>(joint_agree) / trials;
    const double single_rate = static_cast<double>(single_agree) / trials;
    std::printf("joint decoder vs exhaustive joint MAP:  %d/%d agree (%.4f)\n", joint_agree,
                trials, joint_rate);
    std::printf("single-user decoder vs exhaustive MAP:  %d/%d agree (%.4f)\n", single_agree,
                trials, single_rate);
    if (joint_rate < 0.95 || single_rate < 0.95) {
        std::fprintf(stderr, "decode-oracle: agreement below 0.95\n");
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-packet collision decoding simulator (joint BP over misaligned RA codes)"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a Monte Carlo BER/PER sweep");
    std::string schemes_text = "ccresm,turbo_sic,independent,single_user";
    std::string snr_text;
    std::string delta_text = "0.1,0.3,0.5";
    ccresm::SweepConfig cfg;
    std::string feedback_text = "app";
    std::string config_path;
    sim->add_option("--schemes", schemes_text, "comma list of decoders to run")
        ->capture_default_str();
    sim->add_option("--snr", snr_text, "SNR points in dB: comma list or start:step:stop");
    sim->add_option("--delta", delta_text, "symbol misalignment values in (0,1)")
        ->capture_default_str();
    sim->add_option("--N", cfg.N, "source bits per packet")->capture_default_str();
    sim->add_option("--q", cfg.q, "repeat factor")->capture_default_str();
    sim->add_option("--m", cfg.m, "outer iterations (Turbo-SIC rounds)")->capture_default_str();
    sim->add_option("--n-inner", cfg.n_inner, "RA iterations per outer round")
        ->capture_default_str();
    sim->add_option("--packets", cfg.packets, "trials per cell")->capture_default_str();
    sim->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    sim->add_option("--out", cfg.out, "output CSV path");
    sim->add_option("--threads", cfg.threads, "worker threads (0 = hardware)")
        ->capture_default_str();
    sim->add_flag("--tail", cfg.include_tail_sample,
                  "sample the trailing sliver of user B's last symbol");
    sim->add_option("--feedback", feedback_text, "Turbo-SIC feedback: app or extrinsic")
        ->check(CLI::IsMember({"app", "extrinsic"}))
        ->capture_default_str();
    sim->add_option("--config", config_path,
                    "flat key=value file with the same keys as the flags; "
                    "command-line values win");

    // plot
    auto* plot = app.add_subcommand("plot", "render a sweep CSV as an SVG");
    std::string plot_in, plot_out;
    std::string kind_text = "ber";
    plot->add_option("--in", plot_in, "input CSV")->required();
    plot->add_option("--kind", kind_text, "ber or per")
        ->check(CLI::IsMember({"ber", "per"}))
        ->capture_default_str();
    plot->add_option("--out", plot_out, "output SVG path")->required();

    // decode-oracle
    auto* oracle = app.add_subcommand(
        "decode-oracle", "compare the joint decoder against exhaustive MAP enumeration");
    int on = 4, otrials = 1000, oiters = 50;
    double osnr = 6.0, odelta = 0.5;
    int oq = 3;
    std::uint64_t oseed = 42;
    oracle->add_option("--N", on, "source bits per packet (<= 8)")->capture_default_str();
    oracle->add_option("--trials", otrials, "number of random trials")->capture_default_str();
    oracle->add_option("--snr", osnr, "SNR in dB")->capture_default_str();
    oracle->add_option("--delta", odelta, "symbol misalignment")->capture_default_str();
    oracle->add_option("--q", oq, "repeat factor")->capture_default_str();
    oracle->add_option("--iters", oiters, "decoder iterations")->capture_default_str();
    oracle->add_option("--seed", oseed, "seed")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            if (!config_path.empty()) {
                // fill in anything the command line did not set
                auto kv = read_flat_config(config_path);
                auto take = [&](const char* flag, const std::string& key, auto apply) {
                    const auto it = kv.find(key);
                    if (it == kv.end()) return;
                    if (sim->get_option(flag)->count() == 0) apply(it->second);
                    kv.erase(it);
                };
                take("--schemes", "schemes", [&](const std::string& v) { schemes_text = v; });
                take("--snr", "snr", [&](const std::string& v) { snr_text = v; });
                take("--delta", "delta", [&](const std::string& v) { delta_text = v; });
                take("--N", "N", [&](const std::string& v) { cfg.N = std::stoi(v); });
                take("--q", "q", [&](const std::string& v) { cfg.q = std::stoi(v); });
                take("--m", "m", [&](const std::string& v) { cfg.m = std::stoi(v); });
                take("--n-inner", "n-inner",
                     [&](const std::string& v) { cfg.n_inner = std::stoi(v); });
                take("--packets", "packets",
                     [&](const std::string& v) { cfg.packets = std::stoi(v); });
                take("--seed", "seed", [&](const std::string& v) { cfg.seed = std::stoull(v); });
                take("--out", "out", [&](const std::string& v) { cfg.out = v; });
                take("--threads", "threads",
                     [&](const std::string& v) { cfg.threads = std::stoi(v); });
                take("--tail", "tail", [&](const std::string& v) {
                    cfg.include_tail_sample = (v == "1" || v == "true" || v == "yes");
                });
                take("--feedback", "feedback",
                     [&](const std::string& v) { feedback_text = v; });
                if (!kv.empty())
                    throw std::runtime_error("unknown config key '" + kv.begin()->first + "' in " +
                                             config_path);
            }
            if (snr_text.empty()) throw std::runtime_error("--snr is required");
            if (cfg.out.empty()) throw std::runtime_error("--out is required");
            if (feedback_text != "app" && feedback_text != "extrinsic")
                throw std::runtime_error("feedback must be app or extrinsic");
            cfg.schemes = parse_schemes(schemes_text);
            cfg.snr_db = parse_value_list(snr_text);
            cfg.deltas = parse_value_list(delta_text);
            cfg.feedback =
                feedback_text == "extrinsic" ? ccresm::Feedback::Extrinsic : ccresm::Feedback::App;
            cfg.progress = true;
            ccresm::run_sweep(cfg);
            std::fprintf(stderr, "wrote %s\n", cfg.out.c_str());
        } else if (plot->parsed()) {
            const auto result = ccresm::sweep_from_csv_file(plot_in);
            const auto kind =
                kind_text == "per" ? ccresm::PlotKind::Per : ccresm::PlotKind::Ber;
            ccresm::emit_plot(result, kind, plot_out);
            std::fprintf(stderr, "wrote %s\n", plot_out.c_str());
        } else if (oracle->parsed()) {
            return run_decode_oracle(on, otrials, osnr, odelta, oq, oiters, oseed);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
