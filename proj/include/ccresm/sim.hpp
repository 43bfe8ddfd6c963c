#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccresm/baselines.hpp"
#include "ccresm/channel.hpp"
#include "ccresm/joint_decoder.hpp"
#include "ccresm/ra_code.hpp"

namespace ccresm {

enum class Scheme { Ccresm, TurboSic, Independent, SingleUser };

const char* scheme_name(Scheme s);
std::optional<Scheme> scheme_from_name(std::string_view name);

inline double snr_to_sigma2(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

// One Monte Carlo campaign: schemes x deltas x SNR points, `packets`
// two-packet trials per cell.  The joint decoder runs m * n_inner
// iterations so every scheme spends the same iteration budget.
struct SweepConfig {
    std::vector<Scheme> schemes{Scheme::Ccresm, Scheme::TurboSic, Scheme::Independent,
                                Scheme::SingleUser};
    std::vector<double> snr_db;
    std::vector<double> deltas{0.1, 0.3, 0.5};
    int N = 512;
    int q = 3;
    int m = 5;
    int n_inner = 10;
    int packets = 2000;
    std::uint64_t seed = 42;
    std::string out;
    int threads = 0;  // 0 = hardware concurrency
    bool include_tail_sample = false;
    Feedback feedback = Feedback::App;
    bool progress = false;  // per-cell status lines on stderr

    int total_iters() const { return m * n_inner; }
};

void validate(const SweepConfig& cfg);

// Everything a trial consumes before the decoder runs.  Derived only from
// (seed, delta, snr_db, trial), never from the scheme, so paired
// comparisons across schemes see identical packets, interleavers and noise.
struct TrialInputs {
    RaConfig cfg_a, cfg_b;
    BitVector source_a, source_b;
    BitVector coded_a, coded_b;
    ChannelConfig chan;
    SampleFrame frame;
    std::vector<double> single_a, single_b;  // no-collision channel outputs
};

TrialInputs make_trial_inputs(const SweepConfig& cfg, double snr_db, double delta, int trial);

struct TrialRecord {
    Scheme scheme = Scheme::Ccresm;
    double snr_db = 0.0;
    double delta = 0.0;
    int trial = 0;
    int bit_errors_a = 0;
    int bit_errors_b = 0;
    bool pkt_err_a = false;
    bool pkt_err_b = false;
    int iterations = 0;

    bool operator==(const TrialRecord&) const = default;
};

TrialRecord run_trial(const SweepConfig& cfg, Scheme scheme, double snr_db, double delta,
                      int trial);

struct CellResult {
    Scheme scheme = Scheme::Ccresm;
    double delta = 0.0;
    double snr_db = 0.0;
    long long packets = 0;
    long long bit_errors = 0;
    long long bits = 0;
    long long pkt_errors = 0;
    long long pkts = 0;
    double ber = 0.0;
    double ber_ci95 = 0.0;
    double per = 0.0;
    double per_ci95 = 0.0;
    double mean_iters = 0.0;
};

struct SweepResult {
    std::vector<CellResult> cells;
};

// Runs every cell, trials parallel over `threads` workers with a fixed
// reduction order, and writes the CSV to cfg.out when set.  Output is
// byte-identical for a given config regardless of the worker count.
SweepResult run_sweep(const SweepConfig& cfg);

// CSV schema:
// scheme,delta,snr_db,packets,bit_errors,bits,ber,ber_ci95,pkt_errors,pkts,per,per_ci95,mean_iters
extern const char* const kCsvHeader;
std::string to_csv(const SweepResult& result);

// Reads a result CSV.  Requires scheme/delta/snr_db plus at least one of
// the ber/per column groups; a missing group parses as NaN so kind checks
// can reject it downstream.
SweepResult sweep_from_csv(const std::string& text);
SweepResult sweep_from_csv_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace ccresm
