#include "thebench/model.hpp"

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "thebench/errors.hpp"
#include "thebench/lambda.hpp"
#include "thebench/reduce.hpp"

namespace thebench {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& xs) {
    double m = kNegInf;
    for (double x : xs) m = std::max(m, x);
    if (m == kNegInf) return kNegInf;
    double s = 0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

void set_weight(Element& e, double w) {
    std::visit(
        [w](auto& el) {
            if constexpr (!std::is_same_v<std::decay_t<decltype(el)>, SymRule>) el.weight = w;
        },
        e);
}

/// What training needs from one parsed pair; weights do not change parses.
struct Parsed {
    bool parsed = false;
    std::vector<FeatureVector> feats;
    std::vector<std::string> lfs;
    std::string gold;
};

struct Scored {
    std::vector<double> scores;
    double log_z = kNegInf;
};

Scored score_all(const std::vector<FeatureVector>& feats, const Weights& theta) {
    Scored s;
    s.scores.reserve(feats.size());
    for (const auto& f : feats) s.scores.push_back(logscore(f, theta));
    s.log_z = log_sum_exp(s.scores);
    return s;
}

GradientResult gradient_of(const std::vector<FeatureVector>& feats, const std::vector<std::string>& lfs,
                           const std::string& gold, const Weights& theta) {
    GradientResult out;
    Scored all = score_all(feats, theta);
    std::vector<double> correct;
    for (std::size_t i = 0; i < feats.size(); ++i)
        correct.push_back(lfs[i] == gold ? all.scores[i] : kNegInf);
    double log_zc = log_sum_exp(correct);
    if (log_zc == kNegInf) {
        out.skipped = true;
        out.log_likelihood = kNegInf;
        return out;
    }
    out.log_likelihood = log_zc - all.log_z;
    for (std::size_t i = 0; i < feats.size(); ++i) {
        double p = std::exp(all.scores[i] - all.log_z);
        double q = correct[i] == kNegInf ? 0.0 : std::exp(correct[i] - log_zc);
        double w = q - p;
        if (w == 0) continue;
        for (const auto& [k, c] : feats[i]) out.gradient[k] += w * c;
    }
    return out;
}

/// Most probable LF key; ties go to the smaller key.
std::string top_lf(const Parsed& p, const Weights& theta) {
    Scored s = score_all(p.feats, theta);
    std::map<std::string, double> mass;
    for (std::size_t i = 0; i < p.feats.size(); ++i) mass[p.lfs[i]] += std::exp(s.scores[i] - s.log_z);
    std::string best;
    double best_p = -1;
    for (const auto& [lf, m] : mass)
        if (m > best_p) best_p = m, best = lf;
    return best;
}

Parsed parse_pair(const SupervisionPair& pair, const Lexicon& lex, const Config& cfg) {
    Parsed p;
    p.gold = lf_key(pair.gold, cfg.reduce);
    try {
        auto derivs = analyze(pair.surface, lex, cfg);
        for (const auto& d : derivs) {
            p.feats.push_back(features(d));
            p.lfs.push_back(lf_key(d.lf(), cfg.reduce));
        }
        p.parsed = !derivs.empty();
    } catch (const ChartOverflow&) {
        p.parsed = false;
    }
    return p;
}

}  // namespace

Model Model::from_grammar(Grammar sourced) {
    Model m;
    for (const auto& e : sourced.elements())
        if (auto k = element_key(e)) m.theta[*k] = element_weight(e);
    m.grammar = std::move(sourced);
    return m;
}

Grammar Model::snapshot() const {
    Grammar g = grammar;
    for (auto& e : g.elements()) {
        auto k = element_key(e);
        if (!k) continue;
        auto it = theta.find(*k);
        if (it != theta.end()) set_weight(e, it->second);
    }
    return g;
}

FeatureVector features(const Derivation& d) {
    FeatureVector f;
    for (Key k : d.keys_used()) f[k] += 1;
    return f;
}

double logscore(const FeatureVector& f, const Weights& theta) {
    double s = 0;
    for (const auto& [k, c] : f) {
        auto it = theta.find(k);
        if (it == theta.end()) throw UnknownKey(k);
        s += it->second * c;
    }
    return s;
}

double derivation_logscore(const Derivation& d, const Weights& theta) { return logscore(features(d), theta); }

std::string lf_key(const Term& lf, const ReduceOptions& reduce) { return canonical_string(beta_reduce(lf, reduce)); }

std::vector<RankedLf> rank(const std::vector<Derivation>& derivs, const Weights& theta) {
    if (derivs.empty()) throw NoDerivations("(empty)");
    std::vector<double> scores;
    for (const auto& d : derivs) scores.push_back(derivation_logscore(d, theta));
    double log_z = log_sum_exp(scores);

    struct Group {
        double mass = 0;
        std::size_t best = 0;
    };
    std::map<std::string, Group> groups;
    for (std::size_t i = 0; i < derivs.size(); ++i) {
        std::string key = canonical_string(derivs[i].lf());
        auto [it, fresh] = groups.try_emplace(key);
        it->second.mass += std::exp(scores[i] - log_z);
        if (fresh || scores[i] > scores[it->second.best]) it->second.best = i;
    }
    std::vector<std::pair<std::string, RankedLf>> keyed;
    for (const auto& [key, g] : groups)
        keyed.push_back({key, RankedLf{derivs[g.best].lf(), g.mass, derivs[g.best]}});
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        if (a.second.probability != b.second.probability) return a.second.probability > b.second.probability;
        return a.first < b.first;
    });
    std::vector<RankedLf> out;
    for (auto& [key, r] : keyed) out.push_back(std::move(r));
    return out;
}

std::vector<RankedLf> rank(std::string_view input, const Lexicon& lex, const Weights& theta, const Config& cfg) {
    auto derivs = analyze(input, lex, cfg);
    if (derivs.empty()) throw NoDerivations(std::string(input));
    return rank(derivs, theta);
}

std::string bare_line(std::string_view input, const RankedLf& top) {
    return "[" + std::string(input) + " " + to_string(top.lf) + "]";
}

GradientResult gradient(const std::vector<Derivation>& derivs, const Term& gold, const Weights& theta) {
    std::vector<FeatureVector> feats;
    std::vector<std::string> lfs;
    for (const auto& d : derivs) {
        feats.push_back(features(d));
        lfs.push_back(canonical_string(d.lf()));
    }
    return gradient_of(feats, lfs, lf_key(gold), theta);
}

GradientResult gradient(const SupervisionPair& pair, const Lexicon& lex, const Weights& theta, const Config& cfg) {
    auto derivs = analyze(pair.surface, lex, cfg);
    if (derivs.empty()) throw NoDerivations(surface_text(pair.surface));
    return gradient(derivs, pair.gold, theta);
}

std::vector<Key> beam_filter(const Weights& delta_prev, double exponent) {
    double max = 0;
    for (const auto& [k, d] : delta_prev) max = std::max(max, std::abs(d));
    std::vector<Key> out;
    if (max == 0) return out;
    double threshold = std::min(std::pow(max, exponent), max);
    for (const auto& [k, d] : delta_prev)
        if (d != 0 && std::abs(d) >= threshold) out.push_back(k);
    return out;
}

std::vector<double> mpe_extrapolate(const std::vector<std::vector<double>>& iterates) {
    if (iterates.empty()) return {};
    const std::vector<double>& last = iterates.back();
    const std::size_t m = iterates.size() - 1;  // number of differences
    const auto n = static_cast<Eigen::Index>(last.size());
    if (m < 2 || n == 0) return last;

    Eigen::MatrixXd u(n, static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            u(i, static_cast<Eigen::Index>(j)) = iterates[j + 1][static_cast<std::size_t>(i)] -
                                                 iterates[j][static_cast<std::size_t>(i)];
    if (u.norm() == 0) return last;

    const auto k = static_cast<Eigen::Index>(m - 1);
    Eigen::VectorXd c(static_cast<Eigen::Index>(m));
    c.head(k) = u.leftCols(k).colPivHouseholderQr().solve(-u.col(k));
    c(k) = 1.0;
    double sum = c.sum();
    if (!std::isfinite(sum) || std::abs(sum) < 1e-12) return last;
    Eigen::VectorXd gamma = c / sum;

    std::vector<double> out(last.size(), 0.0);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += gamma(static_cast<Eigen::Index>(j)) * iterates[j][i];
    for (double v : out)
        if (!std::isfinite(v)) return last;
    return out;
}

std::string run_stem(const ExperimentSpec& spec) {
    return spec.log_prefix + "-" + format_weight(spec.learning_rate) + "-" + format_weight(spec.learning_rate_rate) +
           "-" + (spec.extrapolate ? std::string("xp") : std::to_string(spec.iterations));
}

TrainResult train(const Grammar& sourced, const std::vector<SupervisionPair>& pairs, const ExperimentSpec& spec,
                  const TrainOptions& opts, Config cfg) {
    if (pairs.empty()) throw EmptySupervision();
    if (spec.pre_function) call_processor_function(*spec.pre_function, cfg);
    cfg.set_heap_mb(spec.heap_mb);

    const std::string stem = run_stem(spec);
    TrainResult result;
    result.log = opts.out_dir / (stem + ".log");
    std::ofstream log(result.log, std::ios::trunc);
    if (!log) throw IoError("cannot write " + result.log.string());
    log << "experiment " << spec.source_line << '\n' << show_config(cfg) << '\n';

    Model model = Model::from_grammar(sourced);
    Lexicon lex(model.grammar);
    std::vector<Parsed> parsed;
    for (const auto& p : pairs) parsed.push_back(parse_pair(p, lex, cfg));

    auto evaluate = [&](EpochRecord& r, const Weights& theta) {
        r.evaluated = static_cast<int>(parsed.size());
        for (const auto& p : parsed)
            if (p.parsed && top_lf(p, theta) == p.gold) ++r.correct;
    };
    auto write_record = [&](const EpochRecord& r) {
        log << "epoch " << r.epoch << (r.extrapolated ? " xp" : "") << " accuracy " << r.correct << '/'
            << r.evaluated << " skipped " << r.skipped << " unparsed " << r.unparsed << " alpha " << r.alpha
            << " seconds " << r.seconds << '\n';
        log.flush();
    };

    std::vector<Weights> snaps;
    Weights theta = model.theta;
    {
        EpochRecord r;
        evaluate(r, theta);
        write_record(r);
        result.epochs.push_back(r);
        snaps.push_back(theta);
    }

    const int epochs = spec.extrapolate ? opts.xp_epochs : spec.iterations;
    Weights delta_prev;
    for (int t = 1; t <= epochs; ++t) {
        auto t0 = std::chrono::steady_clock::now();
        EpochRecord r;
        r.epoch = t;
        r.alpha = spec.learning_rate / (1.0 + spec.learning_rate_rate * (t - 1));
        std::optional<std::set<Key>> allowed;
        if (cfg.beam && t > 1) {
            auto keep = beam_filter(delta_prev, cfg.beam_exponent);
            allowed.emplace(keep.begin(), keep.end());
        }
        Weights before = theta;
        for (const auto& p : parsed) {
            if (!p.parsed) {
                ++r.unparsed;
                continue;
            }
            GradientResult g = gradient_of(p.feats, p.lfs, p.gold, theta);
            if (g.skipped) {
                ++r.skipped;
                continue;
            }
            for (const auto& [k, v] : g.gradient)
                if (!allowed || allowed->count(k)) theta[k] += r.alpha * v;
        }
        delta_prev.clear();
        for (const auto& [k, v] : theta) delta_prev[k] = v - before.at(k);
        evaluate(r, theta);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_record(r);
        result.epochs.push_back(r);
        snaps.push_back(theta);
    }

    if (spec.extrapolate) {
        const int window = std::max(1, std::min<int>(opts.xp_window, static_cast<int>(snaps.size())));
        std::vector<std::vector<double>> seq;
        for (auto it = snaps.end() - window; it != snaps.end(); ++it) {
            std::vector<double> v;
            for (const auto& [k, w] : *it) v.push_back(w);
            seq.push_back(std::move(v));
        }
        std::vector<double> x = mpe_extrapolate(seq);
        Weights xp = theta;
        std::size_t i = 0;
        for (auto& [k, w] : xp) w = x[i++];
        EpochRecord r;
        r.epoch = epochs + 1;
        r.extrapolated = true;
        evaluate(r, xp);
        write_record(r);
        result.epochs.push_back(r);
        snaps.push_back(xp);
    }

    std::vector<int> order(snaps.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& ra = result.epochs[static_cast<std::size_t>(a)];
        const auto& rb = result.epochs[static_cast<std::size_t>(b)];
        if (ra.correct != rb.correct) return ra.correct > rb.correct;
        return ra.epoch > rb.epoch;
    });
    const int n = std::min<int>(std::max(1, opts.candidates), static_cast<int>(order.size()));
    for (int i = 0; i < n; ++i) {
        int e = order[static_cast<std::size_t>(i)];
        Model m = model;
        m.theta = snaps[static_cast<std::size_t>(e)];
        auto path = opts.out_dir / (stem + "-cand" + std::to_string(i + 1) + ".txt");
        atomic_write(path, regenerate_text(m.snapshot()));
        result.candidates.push_back(path);
        result.candidate_epochs.push_back(result.epochs[static_cast<std::size_t>(e)].epoch);
        log << "candidate " << (i + 1) << " epoch " << result.epochs[static_cast<std::size_t>(e)].epoch << ' '
            << path.filename().string() << '\n';
    }
    log << "done\n";
    result.final_theta = snaps.back();
    return result;
}

Grammar load_sourced_grammar(const std::filesystem::path& path) {
    if (path.extension() == ".src") return read_src(path);
    ParsedGrammar pg = parse_grammar_text(read_file(path));
    if (!pg.ok()) throw ParseErrors(pg.diagnostics);
    return source_grammar(pg.grammar);
}

std::vector<SupervisionPair> load_supervision(const std::filesystem::path& path) {
    if (path.extension() == ".sup") return read_sup(path);
    return parse_supervision(read_file(path));
}

std::vector<JobHandle> spawn_experiments(const std::vector<TrainRun>& runs, const std::filesystem::path& status_dir) {
    std::vector<JobHandle> jobs;
    for (const auto& run : runs) {
        JobHandle job;
        job.stem = run_stem(run.spec);
        job.status_file = status_dir / (job.stem + ".status");
        atomic_write(job.status_file, "running\n");

        int fds[2];
        if (::pipe(fds) != 0) {
            job.error = "pipe failed";
            atomic_write(job.status_file, "failed: " + job.error + "\n");
            jobs.push_back(job);
            continue;
        }
        pid_t child = ::fork();
        if (child < 0) {
            ::close(fds[0]);
            ::close(fds[1]);
            job.error = "fork failed";
            atomic_write(job.status_file, "failed: " + job.error + "\n");
            jobs.push_back(job);
            continue;
        }
        if (child == 0) {
            ::close(fds[0]);
            ::setsid();
            pid_t worker = ::fork();
            if (worker != 0) {
                ::_exit(worker < 0 ? 1 : 0);
            }
            pid_t self = ::getpid();
            (void)!::write(fds[1], &self, sizeof self);
            ::close(fds[1]);
            int devnull = ::open("/dev/null", O_RDWR);
            if (devnull >= 0) {
                ::dup2(devnull, 0);
                ::dup2(devnull, 1);
                ::dup2(devnull, 2);
            }
            for (int fd = 3, top = static_cast<int>(::sysconf(_SC_OPEN_MAX)); fd < top && fd < 65536; ++fd) ::close(fd);
            int code = 0;
            try {
                Grammar g = load_sourced_grammar(run.grammar_path);
                auto pairs = load_supervision(run.supervision_path);
                TrainResult r = train(g, pairs, run.spec, run.options);
                atomic_write(job.status_file, "finished\n" + r.log.string() + "\n");
            } catch (const std::exception& e) {
                code = 1;
                try {
                    atomic_write(job.status_file, std::string("failed: ") + e.what() + "\n");
                } catch (...) {
                }
            }
            ::_exit(code);
        }
        ::close(fds[1]);
        int status = 0;
        ::waitpid(child, &status, 0);
        pid_t worker = -1;
        if (::read(fds[0], &worker, sizeof worker) == static_cast<ssize_t>(sizeof worker)) job.pid = worker;
        ::close(fds[0]);
        if (job.pid < 0) {
            job.error = "worker did not start";
            atomic_write(job.status_file, "failed: " + job.error + "\n");
        }
        jobs.push_back(job);
    }
    return jobs;
}

std::string read_status(const std::filesystem::path& status_file) {
    std::ifstream in(status_file);
    std::string line;
    std::getline(in, line);
    return line;
}

}  // namespace thebench
