#include "ccresm/sim.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ccresm {

const char* const kCsvHeader =
    "scheme,delta,snr_db,packets,bit_errors,bits,ber,ber_ci95,pkt_errors,pkts,per,per_ci95,"
    "mean_iters";

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Ccresm: return "ccresm";
        case Scheme::TurboSic: return "turbo_sic";
        case Scheme::Independent: return "independent";
        case Scheme::SingleUser: return "single_user";
    }
    return "?";
}

std::optional<Scheme> scheme_from_name(std::string_view name) {
    if (name == "ccresm") return Scheme::Ccresm;
    if (name == "turbo_sic") return Scheme::TurboSic;
    if (name == "independent") return Scheme::Independent;
    if (name == "single_user") return Scheme::SingleUser;
    return std::nullopt;
}

void validate(const SweepConfig& cfg) {
    if (cfg.schemes.empty()) throw std::invalid_argument("sweep: no schemes selected");
    if (cfg.snr_db.empty()) throw std::invalid_argument("sweep: no SNR points");
    if (cfg.deltas.empty()) throw std::invalid_argument("sweep: no delta values");
    for (double d : cfg.deltas)
        if (!(d > 0.0) || !(d < 1.0))
            throw std::invalid_argument("sweep: delta must lie strictly in (0, 1)");
    if (cfg.N < 1 || cfg.q < 1) throw std::invalid_argument("sweep: N and q must be >= 1");
    if (cfg.m < 1 || cfg.n_inner < 1)
        throw std::invalid_argument("sweep: iteration counts must be >= 1");
    if (cfg.packets < 1) throw std::invalid_argument("sweep: packets must be >= 1");
}

TrialInputs make_trial_inputs(const SweepConfig& cfg, double snr_db, double delta, int trial) {
    // Keyed by everything except the scheme: paired comparisons by design.
    SplitRng rng(cfg.seed, std::bit_cast<std::uint64_t>(delta),
                 std::bit_cast<std::uint64_t>(snr_db), static_cast<std::uint64_t>(trial));

    TrialInputs in;
    in.source_a = random_bits(static_cast<std::size_t>(cfg.N), rng);
    in.source_b = random_bits(static_cast<std::size_t>(cfg.N), rng);
    in.cfg_a = {cfg.N, cfg.q, build_interleaver(cfg.N, cfg.q, rng.next_u64())};
    in.cfg_b = {cfg.N, cfg.q, build_interleaver(cfg.N, cfg.q, rng.next_u64())};
    in.coded_a = ra_encode(in.source_a, in.cfg_a);
    in.coded_b = ra_encode(in.source_b, in.cfg_b);
    in.chan = ChannelConfig{delta, snr_to_sigma2(snr_db), cfg.N * cfg.q,
                            cfg.include_tail_sample};
    in.frame = overlap_and_sample(in.coded_a, in.coded_b, in.chan, rng);
    // The no-collision benchmark goes through the same two-window receiver;
    // combining a lone user's odd/even samples is equivalent to one sample
    // with variance delta*(1-delta)*sigma2 (the genie-aided bound of the
    // collision channel).
    const double v_single = delta * (1.0 - delta) * in.chan.sigma2;
    in.single_a = awgn_sample(in.coded_a, v_single, rng);
    in.single_b = awgn_sample(in.coded_b, v_single, rng);
    return in;
}

TrialRecord run_trial(const SweepConfig& cfg, Scheme scheme, double snr_db, double delta,
                      int trial) {
    const TrialInputs in = make_trial_inputs(cfg, snr_db, delta, trial);

    DecodeResult dec;
    switch (scheme) {
        case Scheme::Ccresm: {
            const auto ev = compute_evidence(in.frame, in.chan);
            const VirtualGraph g =
                build_virtual_graph(in.cfg_a, in.cfg_b, cfg.include_tail_sample);
            dec = decode(ev, g, cfg.total_iters());
            break;
        }
        case Scheme::TurboSic: {
            SicConfig sic;
            sic.m = cfg.m;
            sic.n_inner = cfg.n_inner;
            sic.feedback = cfg.feedback;
            dec = decode_turbo_sic(in.frame, in.chan, in.cfg_a, in.cfg_b, sic);
            break;
        }
        case Scheme::Independent: {
            const auto ev = compute_evidence(in.frame, in.chan);
            dec = decode_independent(ev, in.cfg_a, in.cfg_b, cfg.total_iters());
            break;
        }
        case Scheme::SingleUser: {
            RaDecodeOptions opt;
            opt.max_iters = cfg.total_iters();
            const double v_single = delta * (1.0 - delta) * in.chan.sigma2;
            const auto ba = bit_evidence(in.single_a, v_single);
            const auto bb = bit_evidence(in.single_b, v_single);
            const RaDecodeResult ra = ra_decode(ba, in.cfg_a, opt);
            const RaDecodeResult rb = ra_decode(bb, in.cfg_b, opt);
            dec.sa_hat = ra.source_hat;
            dec.sb_hat = rb.source_hat;
            dec.iterations_used = std::max(ra.iterations_used, rb.iterations_used);
            break;
        }
    }

    TrialRecord rec;
    rec.scheme = scheme;
    rec.snr_db = snr_db;
    rec.delta = delta;
    rec.trial = trial;
    rec.bit_errors_a = static_cast<int>(hamming_distance(dec.sa_hat, in.source_a));
    rec.bit_errors_b = static_cast<int>(hamming_distance(dec.sb_hat, in.source_b));
    rec.pkt_err_a = rec.bit_errors_a > 0;
    rec.pkt_err_b = rec.bit_errors_b > 0;
    rec.iterations = dec.iterations_used;
    return rec;
}

namespace {

double binomial_ci95(long long successes, long long total) {
    if (total <= 0) return 0.0;
    const double p = static_cast<double>(successes) / static_cast<double>(total);
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(total));
}

CellResult aggregate_cell(const SweepConfig& cfg, Scheme scheme, double delta, double snr_db,
                          const std::vector<TrialRecord>& records) {
    CellResult c;
    c.scheme = scheme;
    c.delta = delta;
    c.snr_db = snr_db;
    c.packets = cfg.packets;
    c.bits = 2LL * cfg.N * cfg.packets;
    c.pkts = 2LL * cfg.packets;
    long long iters = 0;
    for (const auto& r : records) {
        c.bit_errors += r.bit_errors_a + r.bit_errors_b;
        c.pkt_errors += static_cast<int>(r.pkt_err_a) + static_cast<int>(r.pkt_err_b);
        iters += r.iterations;
    }
    c.ber = static_cast<double>(c.bit_errors) / static_cast<double>(c.bits);
    c.per = static_cast<double>(c.pkt_errors) / static_cast<double>(c.pkts);
    c.ber_ci95 = binomial_ci95(c.bit_errors, c.bits);
    c.per_ci95 = binomial_ci95(c.pkt_errors, c.pkts);
    c.mean_iters = static_cast<double>(iters) / static_cast<double>(cfg.packets);
    return c;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
    validate(cfg);

    std::vector<Scheme> schemes = cfg.schemes;
    std::sort(schemes.begin(), schemes.end(), [](Scheme a, Scheme b) {
        return std::string_view(scheme_name(a)) < std::string_view(scheme_name(b));
    });
    std::vector<double> deltas = cfg.deltas;
    std::sort(deltas.begin(), deltas.end());
    std::vector<double> snrs = cfg.snr_db;
    std::sort(snrs.begin(), snrs.end());

    unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                       : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(cfg.packets));

    SweepResult result;
    const std::size_t total_cells = schemes.size() * deltas.size() * snrs.size();
    std::size_t cell_idx = 0;

    for (Scheme scheme : schemes) {
        for (double delta : deltas) {
            for (double snr : snrs) {
                ++cell_idx;
                const auto t0 = std::chrono::steady_clock::now();
                std::vector<TrialRecord> records(static_cast<std::size_t>(cfg.packets));
                std::exception_ptr failure;

                auto work = [&](unsigned worker_id) {
                    try {
                        for (int t = static_cast<int>(worker_id); t < cfg.packets;
                             t += static_cast<int>(workers)) {
                            records[static_cast<std::size_t>(t)] =
                                run_trial(cfg, scheme, snr, delta, t);
                        }
                    } catch (...) {
                        if (!failure) failure = std::current_exception();
                    }
                };

                if (workers <= 1) {
                    work(0);
                } else {
                    std::vector<std::thread> pool;
                    pool.reserve(workers);
                    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
                    for (auto& th : pool) th.join();
                }
                if (failure) {
                    try {
                        std::rethrow_exception(failure);
                    } catch (const std::exception& e) {
                        throw std::runtime_error(std::string("cell (") + scheme_name(scheme) +
                                                 ", delta=" + std::to_string(delta) +
                                                 ", snr=" + std::to_string(snr) +
                                                 " dB): " + e.what());
                    }
                }

                result.cells.push_back(aggregate_cell(cfg, scheme, delta, snr, records));
                if (cfg.progress) {
                    const auto& c = result.cells.back();
                    const double secs =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count();
                    std::fprintf(stderr,
                                 "[%zu/%zu] %s delta=%g snr=%g dB: ber=%.3g per=%.3g "
                                 "mean_iters=%.1f (%.1fs)\n",
                                 cell_idx, total_cells, scheme_name(scheme), delta, snr, c.ber,
                                 c.per, c.mean_iters, secs);
                }
            }
        }
    }

    if (!cfg.out.empty()) write_text_file(cfg.out, to_csv(result));
    return result;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

std::string to_csv(const SweepResult& result) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& c : result.cells) {
        out += scheme_name(c.scheme);
        out += ',';
        out += format_double(c.delta);
        out += ',';
        out += format_double(c.snr_db);
        out += ',';
        out += std::to_string(c.packets);
        out += ',';
        out += std::to_string(c.bit_errors);
        out += ',';
        out += std::to_string(c.bits);
        out += ',';
        out += format_double(c.ber);
        out += ',';
        out += format_double(c.ber_ci95);
        out += ',';
        out += std::to_string(c.pkt_errors);
        out += ',';
        out += std::to_string(c.pkts);
        out += ',';
        out += format_double(c.per);
        out += ',';
        out += format_double(c.per_ci95);
        out += ',';
        out += format_double(c.mean_iters);
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

int find_col(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

}  // namespace

SweepResult sweep_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
    const auto header = split_csv_line(line);

    const int c_scheme = find_col(header, "scheme");
    const int c_delta = find_col(header, "delta");
    const int c_snr = find_col(header, "snr_db");
    if (c_scheme < 0 || c_delta < 0 || c_snr < 0)
        throw std::runtime_error("csv: missing scheme/delta/snr_db columns");
    const int c_ber = find_col(header, "ber");
    const int c_ber_ci = find_col(header, "ber_ci95");
    const int c_per = find_col(header, "per");
    const int c_per_ci = find_col(header, "per_ci95");
    if (c_ber < 0 && c_per < 0)
        throw std::runtime_error("csv: needs at least one of the ber/per column groups");
    const int c_packets = find_col(header, "packets");
    const int c_bit_errors = find_col(header, "bit_errors");
    const int c_bits = find_col(header, "bits");
    const int c_pkt_errors = find_col(header, "pkt_errors");
    const int c_pkts = find_col(header, "pkts");
    const int c_iters = find_col(header, "mean_iters");

    const double nan = std::numeric_limits<double>::quiet_NaN();
    SweepResult result;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv_line(line);
        if (f.size() != header.size())
            throw std::runtime_error("csv: line " + std::to_string(line_no) +
                                     " has wrong field count");
        auto fval = [&](int col) { return col >= 0 ? std::stod(f[static_cast<std::size_t>(col)]) : nan; };
        auto ival = [&](int col) {
            return col >= 0 ? std::stoll(f[static_cast<std::size_t>(col)]) : 0LL;
        };
        CellResult c;
        const auto s = scheme_from_name(f[static_cast<std::size_t>(c_scheme)]);
        if (!s)
            throw std::runtime_error("csv: unknown scheme '" +
                                     f[static_cast<std::size_t>(c_scheme)] + "' on line " +
                                     std::to_string(line_no));
        c.scheme = *s;
        c.delta = fval(c_delta);
        c.snr_db = fval(c_snr);
        c.packets = ival(c_packets);
        c.bit_errors = ival(c_bit_errors);
        c.bits = ival(c_bits);
        c.pkt_errors = ival(c_pkt_errors);
        c.pkts = ival(c_pkts);
        c.ber = fval(c_ber);
        c.ber_ci95 = fval(c_ber_ci);
        c.per = fval(c_per);
        c.per_ci95 = fval(c_per_ci);
        c.mean_iters = fval(c_iters);
        result.cells.push_back(c);
    }
    return result;
}

SweepResult sweep_from_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return sweep_from_csv(ss.str());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace ccresm
