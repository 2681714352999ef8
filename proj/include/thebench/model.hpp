#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thebench/config.hpp"
#include "thebench/engine.hpp"
#include "thebench/grammar.hpp"
#include "thebench/grammar_io.hpp"

namespace thebench {

using Weights = std::map<Key, double>;
/// Key -> number of uses in one derivation.
using FeatureVector = std::map<Key, double>;

/// A sourced grammar with one parameter per keyed element.
struct Model {
    Grammar grammar;
    Weights theta;

    /// Parameters start at the stored weights.
    static Model from_grammar(Grammar sourced);
    /// The grammar with weights replaced by the current parameters.
    Grammar snapshot() const;
};

FeatureVector features(const Derivation& d);
double derivation_logscore(const Derivation& d, const Weights& theta);  // throws UnknownKey
double logscore(const FeatureVector& f, const Weights& theta);

/// Canonical print of the beta-normal form, equal for alpha-variants.
std::string lf_key(const Term& lf, const ReduceOptions& reduce = {});

struct RankedLf {
    Term lf;
    double probability = 0;
    Derivation best;  // highest-scoring derivation with this LF
};

/// Softmax over derivations, summed per LF; descending probability, ties by
/// canonical LF print. Throws NoDerivations on an empty list.
std::vector<RankedLf> rank(const std::vector<Derivation>& derivs, const Weights& theta);
std::vector<RankedLf> rank(std::string_view input, const Lexicon& lex, const Weights& theta,
                           const Config& cfg);

/// `[string likeliest-solution]`
std::string bare_line(std::string_view input, const RankedLf& top);

struct GradientResult {
    FeatureVector gradient;
    bool skipped = false;         // gold unreachable
    double log_likelihood = 0;    // log P(gold | surface); -inf when skipped
};

/// E[f | lf = gold] - E[f] under the softmax. Gold is compared up to alpha
/// after beta normalization.
GradientResult gradient(const std::vector<Derivation>& derivs, const Term& gold, const Weights& theta);
/// Parses the surface first; throws NoDerivations.
GradientResult gradient(const SupervisionPair& pair, const Lexicon& lex, const Weights& theta,
                        const Config& cfg);

/// Keys whose last change is at least min(max|d|^exponent, max|d|);
/// unchanged keys never pass.
std::vector<Key> beam_filter(const Weights& delta_prev, double exponent);

/// Minimal polynomial extrapolation of a vector sequence. A sequence with
/// no usable differences gives back its last element.
std::vector<double> mpe_extrapolate(const std::vector<std::vector<double>>& iterates);

struct TrainOptions {
    int candidates = 1;
    int xp_epochs = 20;
    int xp_window = 5;
    std::filesystem::path out_dir = ".";
};

struct EpochRecord {
    int epoch = 0;  // 0 = initial weights; under xp the extrapolation is epochs+1
    bool extrapolated = false;
    int correct = 0;
    int evaluated = 0;
    int skipped = 0;       // gold unreachable
    int unparsed = 0;      // no derivation or chart overflow
    double alpha = 0;
    double seconds = 0;
    double accuracy() const { return evaluated ? static_cast<double>(correct) / evaluated : 0.0; }
};

struct TrainResult {
    std::vector<EpochRecord> epochs;
    std::vector<std::filesystem::path> candidates;  // best first
    std::vector<int> candidate_epochs;
    std::filesystem::path log;
    Weights final_theta;
};

/// `<prefix>-<lr>-<lrr>-<iters|xp>`
std::string run_stem(const ExperimentSpec& spec);

/// Stochastic gradient ascent with alpha_t = lr / (1 + lrr (t - 1)).
/// Throws EmptySupervision, UnknownPreFunction, IoError.
TrainResult train(const Grammar& sourced, const std::vector<SupervisionPair>& pairs,
                  const ExperimentSpec& spec, const TrainOptions& opts, Config cfg = {});

/// Loads a grammar (text or `.src`) and a supervision file (text or `.sup`).
Grammar load_sourced_grammar(const std::filesystem::path& path);
std::vector<SupervisionPair> load_supervision(const std::filesystem::path& path);

struct TrainRun {
    ExperimentSpec spec;
    std::filesystem::path grammar_path;
    std::filesystem::path supervision_path;
    TrainOptions options;
};

struct JobHandle {
    std::string stem;
    std::filesystem::path status_file;
    int pid = -1;            // detached worker
    std::string error;       // non-empty when spawning failed
};

/// One detached worker per run, each in its own session; the caller may exit
/// without affecting them. Status files (`running`, `finished`, `failed: ...`)
/// go to `status_dir`.
std::vector<JobHandle> spawn_experiments(const std::vector<TrainRun>& runs,
                                         const std::filesystem::path& status_dir);

/// First line of a status file, or empty.
std::string read_status(const std::filesystem::path& status_file);

}  // namespace thebench
