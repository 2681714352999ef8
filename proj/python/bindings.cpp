#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "thebench/casegen.hpp"
#include "thebench/errors.hpp"
#include "thebench/grammar_io.hpp"
#include "thebench/model.hpp"
#include "thebench/notation.hpp"
#include "thebench/reduce.hpp"

namespace py = pybind11;
using namespace thebench;

namespace {

Grammar sourced_text(const std::string& text) {
    ParsedGrammar pg = parse_grammar_text(text);
    if (!pg.ok()) throw ParseErrors(pg.diagnostics);
    return source_grammar(pg.grammar);
}

Config make_config(bool nfparse, bool oov) {
    Config cfg;
    cfg.nfparse = nfparse;
    cfg.oov = oov;
    return cfg;
}

/// A sourced grammar with its lookup tables.
class PyGrammar {
public:
    explicit PyGrammar(Grammar g) : lex_(std::make_shared<Lexicon>(std::move(g))) {}

    static PyGrammar from_text(const std::string& text) { return PyGrammar(sourced_text(text)); }
    static PyGrammar from_file(const std::filesystem::path& path) { return PyGrammar(load_sourced_grammar(path)); }

    std::size_t size() const { return grammar().size(); }
    std::string text() const { return regenerate_text(grammar()); }
    const Grammar& grammar() const { return lex_->grammar(); }

    std::vector<std::pair<std::string, std::string>> analyze(const std::string& input, bool nfparse, bool oov) const {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& d : thebench::analyze(input, *lex_, make_config(nfparse, oov)))
            out.emplace_back(to_string(d.category()), to_string(d.lf()));
        return out;
    }

    std::vector<std::pair<std::string, double>> rank(const std::string& input, bool nfparse, bool oov) const {
        Weights theta = Model::from_grammar(grammar()).theta;
        std::vector<std::pair<std::string, double>> out;
        for (const auto& r : thebench::rank(input, *lex_, theta, make_config(nfparse, oov)))
            out.emplace_back(to_string(r.lf), r.probability);
        return out;
    }

    py::tuple case_functions(const std::vector<std::string>& pos) const {
        CaseGeneration gen = generate_case_functions(grammar(), pos);
        return py::make_tuple(arules_text(gen.rules), gen.notes);
    }

    PyGrammar merged(const std::string& rules_text) const {
        ParsedGrammar pg = parse_grammar_text(rules_text);
        if (!pg.ok()) throw ParseErrors(pg.diagnostics);
        Grammar g = grammar();
        Key next = 1;
        for (const auto& e : g.elements())
            if (auto k = element_key(e)) next = std::max(next, *k + 1);
        Grammar extra = source_grammar(pg.grammar);
        for (auto e : extra.elements()) {
            std::visit([&](auto& x) {
                if constexpr (!std::is_same_v<std::decay_t<decltype(x)>, SymRule>) x.key = next++;
            }, e);
            g.add(std::move(e));
        }
        return PyGrammar(std::move(g));
    }

private:
    std::shared_ptr<Lexicon> lex_;
};

py::dict train_run(const std::filesystem::path& grammar_path, const std::filesystem::path& supervision_path,
                   const std::string& experiment_line, const std::filesystem::path& out_dir, int candidates) {
    TrainOptions opts;
    opts.out_dir = out_dir;
    opts.candidates = candidates;
    TrainResult r = train(load_sourced_grammar(grammar_path), load_supervision(supervision_path),
                          parse_experiment_line(experiment_line, 1), opts);
    std::vector<double> accuracy;
    for (const auto& e : r.epochs) accuracy.push_back(e.accuracy());
    py::dict d;
    d["log"] = r.log;
    d["candidates"] = r.candidates;
    d["candidate_epochs"] = r.candidate_epochs;
    d["accuracy"] = accuracy;
    return d;
}

}  // namespace

PYBIND11_MODULE(_thebench, m) {
    m.doc() = "Grammar workbench core";
    py::register_exception<BenchError>(m, "BenchError");

    m.def("category", [](const std::string& s) { return to_string(parse_category(s)); },
          "Canonical print of a category.");
    m.def("normalize", [](const std::string& s) { return to_string(beta_reduce(parse_term(s))); },
          "Beta-normal form of a lambda term.");
    m.def("alpha_equiv", [](const std::string& a, const std::string& b) {
        return alpha_equiv(parse_term(a), parse_term(b));
    });

    py::class_<PyGrammar>(m, "Grammar")
        .def_static("from_text", &PyGrammar::from_text)
        .def_static("from_file", &PyGrammar::from_file)
        .def("__len__", &PyGrammar::size)
        .def("text", &PyGrammar::text, "Regenerated text with keys and weights.")
        .def("analyze", &PyGrammar::analyze, py::arg("input"), py::arg("nfparse") = true, py::arg("oov") = false,
             "(category, lf) per derivation.")
        .def("rank", &PyGrammar::rank, py::arg("input"), py::arg("nfparse") = true, py::arg("oov") = false,
             "(lf, probability), likeliest first.")
        .def("case_functions", &PyGrammar::case_functions, py::arg("pos"), "(rules text, notes).")
        .def("merged", &PyGrammar::merged, py::arg("rules_text"), "A copy with extra elements added.");

    m.def("train", &train_run, py::arg("grammar"), py::arg("supervision"), py::arg("experiment"),
          py::arg("out_dir") = std::filesystem::path("."), py::arg("candidates") = 1);
}
