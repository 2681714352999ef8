#include "thebench/session.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <map>
#include <set>
#include <sstream>

#include <sys/wait.h>

#include "json.hpp"

#include "thebench/casegen.hpp"
#include "thebench/errors.hpp"
#include "thebench/grammar_io.hpp"
#include "thebench/lambda.hpp"
#include "thebench/notation.hpp"

#ifndef THEBENCH_VERSION
#define THEBENCH_VERSION "dev"
#endif

namespace thebench {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

/// `[v, n]`, `v,n` and `v n` all give {v, n}.
std::vector<std::string> list_arg(std::string_view s) {
    std::string t(s);
    for (char& c : t)
        if (c == '[' || c == ']' || c == ',') c = ' ';
    return words(t);
}

json category_json(const Cat& c) {
    switch (c->kind()) {
        case Category::Kind::basic: {
            json f = json::object();
            for (const auto& p : c->features().pairs()) f[p.name] = p.value;
            return {{"basic", c->name()}, {"features", f}};
        }
        case Category::Kind::complex:
            return {{"result", category_json(c->result())},
                    {"slash", slash_text(c->slash())},
                    {"arg", category_json(c->arg())}};
        case Category::Kind::singleton:
            return {{"singleton", c->name()}};
        case Category::Kind::meta:
            return {{"meta", c->name()}};
    }
    return nullptr;
}

json term_json(const Term& t) {
    switch (t->kind()) {
        case LambdaTerm::Kind::var:
            return {{"var", t->name()}};
        case LambdaTerm::Kind::constant:
            if (t->string_flag()) return {{"const", t->name()}, {"string", true}};
            return {{"const", t->name()}};
        case LambdaTerm::Kind::abs:
            return {{"lambda", t->name()}, {"body", term_json(t->body())}};
        case LambdaTerm::Kind::app:
            return {{"apply", term_json(t->fun())}, {"to", term_json(t->arg())}};
    }
    return nullptr;
}

json element_json(const Element& e) {
    json j;
    if (const auto* en = std::get_if<Entry>(&e)) {
        j["kind"] = "entry";
        j["phon"] = en->phon;
        j["pos"] = en->pos;
        j["category"] = to_string(en->category);
        j["category_tree"] = category_json(en->category);
        j["lf"] = to_string(en->lf);
        j["lf_tree"] = term_json(en->lf);
    } else if (const auto* r = std::get_if<AsymRule>(&e)) {
        j["kind"] = "asymmetric-rule";
        j["name"] = r->name;
        j["lhs"] = {{"category", to_string(r->lhs_cat)}, {"lf", to_string(r->lhs_lf)}};
        j["rhs"] = {{"category", to_string(r->rhs_cat)},
                    {"category_tree", category_json(r->rhs_cat)},
                    {"lf", to_string(r->rhs_lf)},
                    {"lf_tree", term_json(r->rhs_lf)}};
    } else {
        const auto& s = std::get<SymRule>(e);
        j["kind"] = "symmetric-rule";
        j["name"] = s.name;
        for (const auto* side : {&s.left, &s.right})
            j[side == &s.left ? "left" : "right"] = {
                {"phon", side->phon}, {"category", to_string(side->category)}, {"lf", to_string(side->lf)}};
    }
    if (auto k = element_key(e)) j["key"] = *k;
    if (!std::holds_alternative<SymRule>(e)) j["weight"] = element_weight(e);
    return j;
}

std::string bearer(const Entry& e) { return e.pos.empty() ? e.phon_text() : e.phon_text() + " | " + e.pos; }

void walk_basic(const Cat& c, const std::function<void(const Cat&)>& f) {
    if (c->is_basic()) f(c);
    if (c->is_complex()) {
        walk_basic(c->result(), f);
        walk_basic(c->arg(), f);
    }
}

Key next_key(const Grammar& g) {
    Key k = 0;
    for (const auto& e : g.elements())
        if (auto ek = element_key(e)) k = std::max(k, *ek);
    return k + 1;
}

std::string summary_line(std::size_t i, const Derivation& d) {
    return std::to_string(i) + ". " + to_string(d.category()) + " : " + to_string(d.lf()) + "\n";
}

}  // namespace

std::string report_skeleton(const Grammar& g) {
    if (g.empty()) throw NoGrammarLoaded();
    std::map<std::string, std::map<std::string, std::vector<std::string>>> groups;
    for (const Entry* e : g.entries())
        groups[to_string(skeleton(e->category))][to_string(e->category)].push_back(bearer(*e));
    for (const AsymRule* r : g.arules())
        groups[to_string(skeleton(r->rhs_cat))][to_string(r->rhs_cat)].push_back("#" + r->name);
    std::size_t distinct = 0;
    for (const auto& [sk, cats] : groups) distinct += cats.size();
    std::ostringstream out;
    out << distinct << " distinct " << (distinct == 1 ? "category" : "categories") << " under " << groups.size()
        << (groups.size() == 1 ? " skeleton" : " skeletons") << '\n';
    for (const auto& [sk, cats] : groups) {
        out << sk << '\n';
        for (const auto& [cat, who] : cats) {
            out << "  " << cat << " (" << who.size() << "):";
            for (std::size_t i = 0; i < who.size(); ++i) out << (i ? ", " : " ") << who[i];
            out << '\n';
        }
    }
    return out.str();
}

std::string report_inventory(const Grammar& g) {
    if (g.empty()) throw NoGrammarLoaded();
    std::map<std::string, std::map<std::string, std::set<std::string>>> inv;
    auto note = [&inv](const Cat& c) {
        auto& feats = inv[c->name()];
        for (const auto& p : c->features().pairs()) feats[p.name].insert(p.value);
    };
    for (const Entry* e : g.entries()) walk_basic(e->category, note);
    for (const AsymRule* r : g.arules()) {
        walk_basic(r->lhs_cat, note);
        walk_basic(r->rhs_cat, note);
    }
    std::ostringstream out;
    out << inv.size() << " basic categories\n";
    for (const auto& [name, feats] : inv) {
        out << name << '\n';
        for (const auto& [f, vals] : feats) {
            out << "  " << f << ':';
            for (const auto& v : vals) out << ' ' << v;
            out << '\n';
        }
    }
    return out.str();
}

std::string element_ir(const Element& e, int indent) { return element_json(e).dump(indent); }

std::string grammar_ir(const Grammar& g, int indent) {
    json arr = json::array();
    for (const auto& e : g.elements()) arr.push_back(element_json(e));
    return json{{"format", "thebench-ir 1"}, {"elements", arr}}.dump(indent);
}

std::string help_text() {
    return "letter commands\n"
           "  a <expr>          analyze\n"
           "  c <pos ...>       generate case functions (.sc.arules)\n"
           "  g <file>          load and source a grammar\n"
           "  i                 dump the grammar's intermediate representation\n"
           "  k                 categorial skeleton report\n"
           "  l <fn> [arg]      call a processor function\n"
           "  o <shell cmd>     run a shell command\n"
           "  r <expr>          rank analyses in the current grammar\n"
           "  t <g> <sup> <exp> [n]  train, one detached job per experiment line\n"
           "  z <name>          re-text a workspace .src\n"
           "  e                 unsupported\n"
           "  x                 exit\n"
           "symbol commands\n"
           "  @ <file>          run a command file, output forced to .log\n"
           "  , [n ...]         show stored analyses\n"
           "  # [bare]          show ranked analyses\n"
           "  = <cat ...>       keep analyses onto the listed basic categories\n"
           "  ! [file]          basic categories, features and values\n"
           "  $ <pos>           list elements with this part of speech\n"
           "  - <element>       show an element's intermediate representation\n"
           "  + <code>          unsupported\n"
           "  > <file> [force]  log to file.log\n"
           "  <                 stop logging\n"
           "  /                 clear the workspace\n"
           "  ?                 this help\n"
           "  pass <text>       echo\n"
           "processor functions (l):";
}

std::string welcome_banner() {
    std::time_t now = std::time(nullptr);
    char date[32];
    std::strftime(date, sizeof date, "%Y-%m-%d", std::localtime(&now));
    std::string s = "thebench " THEBENCH_VERSION "\n";
#ifdef __VERSION__
    s += "compiler: " __VERSION__ " (C++20)\n";
#endif
    s += "encoding: UTF-8 in, UTF-8 out\n";
    s += std::string("date: ") + date + "\n";
    s += "type ? for help, x to exit\n";
    return s;
}

// ---------------------------------------------------------------------------

Session::Session(fs::path workspace, std::ostream& console)
    : workspace_(std::move(workspace)), console_(console), confirm_([](const std::string&) { return false; }) {
    std::error_code ec;
    fs::create_directories(workspace_, ec);
}

const Grammar& Session::grammar() const {
    if (!lexicon_) throw NoGrammarLoaded();
    return lexicon_->grammar();
}

const Lexicon& Session::lexicon() const {
    if (!lexicon_) throw NoGrammarLoaded();
    return *lexicon_;
}

void Session::load_grammar(Grammar sourced, std::string name) {
    lexicon_ = std::make_unique<Lexicon>(std::move(sourced));
    grammar_name_ = std::move(name);
    solutions_.clear();
    ranked_.clear();
}

void Session::emit(std::string_view text) {
    console_ << text;
    console_.flush();
    if (user_log_) *user_log_ << text;
    for (auto& l : batch_logs_) *l << text;
}

bool Session::dispatch(std::string_view raw) {
    std::string_view line = trim(raw);
    if (line.empty()) return !finished_;
    history_.emplace_back(line);

    std::string_view cmd, rest;
    static constexpr std::string_view symbols = "@,#=!$-+></?";
    if (symbols.find(line.front()) != std::string_view::npos) {
        cmd = line.substr(0, 1);
        rest = trim(line.substr(1));
    } else {
        auto sp = line.find_first_of(" \t");
        cmd = line.substr(0, sp);
        rest = sp == std::string_view::npos ? std::string_view{} : trim(line.substr(sp));
    }
    try {
        run_command(cmd, rest);
    } catch (const ParseErrors& e) {
        emit(std::string("error: ") + e.what() + "\n");
        for (const auto& d : e.diagnostics()) emit("  " + d.str() + "\n");
    } catch (const std::exception& e) {
        emit(std::string("error: ") + e.what() + "\n");
    }
    return !finished_;
}

void Session::run_command(std::string_view cmd, std::string_view rest) {
    auto need = [&](std::string_view usage) {
        if (rest.empty()) throw BenchError("usage: " + std::string(usage));
    };
    if (cmd == "a") need("a <expression>"), cmd_analyze(rest);
    else if (cmd == "c") need("c <pos ...>"), cmd_casegen(rest);
    else if (cmd == "g") need("g <grammar file>"), cmd_grammar(rest);
    else if (cmd == "i") cmd_ir();
    else if (cmd == "k") cmd_skeleton();
    else if (cmd == "l") need("l <function> [arg]"), cmd_function(rest);
    else if (cmd == "o") need("o <shell command>"), cmd_shell(rest);
    else if (cmd == "r") need("r <expression>"), cmd_rank(rest);
    else if (cmd == "t") need("t <grammar> <supervision> <experiments> [candidates]"), cmd_train(rest);
    else if (cmd == "z") need("z <name>"), cmd_retext(rest);
    else if (cmd == "e") emit("e is not supported: there is no host expression evaluator; use o or l\n");
    else if (cmd == "+") emit("+ is not supported: processor plugins cannot be loaded; use l for built-in functions\n");
    else if (cmd == "x") finished_ = true;
    else if (cmd == "@") need("@ <command file>"), batch(fs::path(std::string(rest)));
    else if (cmd == ",") cmd_show(rest);
    else if (cmd == "#") cmd_ranked(rest);
    else if (cmd == "=") need("= <basic category ...>"), cmd_filter(rest);
    else if (cmd == "!") cmd_inventory(rest);
    else if (cmd == "$") need("$ <pos>"), cmd_by_pos(rest);
    else if (cmd == "-") need("- <element line>"), cmd_element(rest);
    else if (cmd == ">") need("> <file> [force]"), cmd_log_start(rest);
    else if (cmd == "<") cmd_log_stop();
    else if (cmd == "/") cmd_clear_workspace();
    else if (cmd == "?") {
        std::string h = help_text();
        for (const auto& f : processor_functions()) h += " " + f;
        emit(h + "\n");
    } else if (cmd == "pass") emit(std::string(rest) + "\n");
    else throw UnknownCommand(std::string(cmd));
}

void Session::batch(const fs::path& file) {
    if (static_cast<int>(batch_logs_.size()) >= kMaxBatchDepth)
        throw BenchError("command files nested deeper than " + std::to_string(kMaxBatchDepth));
    std::string text = read_file(file);
    fs::path log_path = fs::current_path() / file.filename();
    log_path.replace_extension(".log");
    auto log = std::make_unique<std::ofstream>(log_path, std::ios::trunc);
    if (!*log) throw IoError("cannot write " + log_path.string());
    batch_logs_.push_back(std::move(log));
    struct Pop {
        std::vector<std::unique_ptr<std::ofstream>>& logs;
        ~Pop() { logs.pop_back(); }
    } pop{batch_logs_};

    std::istringstream in(text);
    std::string line;
    while (!finished_ && std::getline(in, line)) {
        std::string_view cmd = trim(line);
        if (cmd.empty() || cmd.front() == '%') continue;
        std::string echo = std::string(kPrompt) + std::string(kPrompt) + std::string(cmd) + "\n";
        for (auto& l : batch_logs_) *l << echo;
        if (user_log_) *user_log_ << echo;
        dispatch(cmd);
    }
    emit("batch " + file.string() + " done, log " + log_path.filename().string() + "\n");
}

void Session::cmd_analyze(std::string_view rest) {
    solutions_ = analyze(rest, lexicon(), cfg_);
    last_input_ = std::string(rest);
    if (solutions_.empty()) {
        emit("no analysis\n");
        return;
    }
    std::string out = std::to_string(solutions_.size()) + (solutions_.size() == 1 ? " analysis\n" : " analyses\n");
    for (std::size_t i = 0; i < solutions_.size(); ++i) out += summary_line(i + 1, solutions_[i]);
    emit(out);
}

void Session::cmd_casegen(std::string_view rest) {
    CaseGeneration gen = generate_case_functions(grammar(), list_arg(rest));
    for (const auto& n : gen.notes) emit("note: " + n + "\n");
    if (gen.rules.empty()) {
        emit("warning: no case functions generated\n");
        return;
    }
    fs::path path = write_arules(gen.rules, grammar_name_.empty() ? "session" : grammar_name_);
    Grammar g = grammar();
    Key k = next_key(g);
    std::string out;
    for (auto& r : gen.rules) {
        r.key = k++;
        out += "  " + element_text(Element{r}) + "\n";
        g.add(Element{r});
    }
    load_grammar(std::move(g), grammar_name_);
    emit(std::to_string(gen.rules.size()) + " case functions written to " + path.filename().string() +
         " and added to the session grammar\n" + out);
}

void Session::cmd_grammar(std::string_view rest) {
    fs::path path{std::string(rest)};
    Grammar sourced;
    if (path.extension() == ".src") {
        sourced = read_src(path);
    } else {
        ParsedGrammar pg = parse_grammar_text(read_file(path));
        if (!pg.ok()) throw ParseErrors(pg.diagnostics);
        sourced = source_grammar(pg.grammar);
    }
    std::string name = path.stem().string();
    fs::path src = workspace_ / (name + ".src");
    write_src(sourced, src);
    std::size_t n = sourced.size();
    load_grammar(std::move(sourced), name);
    emit("loaded " + std::to_string(n) + " elements from " + path.string() + ", sourced to " + src.string() + "\n");
}

void Session::cmd_ir() {
    fs::path out = workspace_ / ((grammar_name_.empty() ? std::string("session") : grammar_name_) + ".ir.json");
    atomic_write(out, grammar_ir(grammar()) + "\n");
    emit("intermediate representation written to " + out.string() + "\n");
}

void Session::cmd_skeleton() { emit(report_skeleton(grammar())); }

void Session::cmd_function(std::string_view rest) {
    auto w = words(rest);
    std::string arg = w.size() > 1 ? w[1] : std::string();
    std::string text = call_processor_function(w[0], cfg_, arg);
    emit(text.empty() ? "ok\n" : text + (text.back() == '\n' ? "" : "\n"));
}

void Session::cmd_shell(std::string_view rest) {
    std::string command = std::string(rest) + " 2>&1";
    FILE* p = ::popen(command.c_str(), "r");
    if (!p) throw IoError("cannot run: " + std::string(rest));
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int status = ::pclose(p);
    emit(out);
    if (status != 0) emit("exit status " + std::to_string(WEXITSTATUS(status)) + "\n");
}

void Session::cmd_rank(std::string_view rest) {
    Weights theta = Model::from_grammar(grammar()).theta;
    ranked_ = rank(rest, lexicon(), theta, cfg_);
    ranked_input_ = std::string(rest);
    std::ostringstream out;
    out.precision(6);
    for (std::size_t i = 0; i < ranked_.size(); ++i)
        out << i + 1 << ". " << std::fixed << ranked_[i].probability << "  " << to_string(ranked_[i].lf) << "  ("
            << to_string(ranked_[i].best.category()) << ")\n";
    emit(out.str());
}

void Session::cmd_train(std::string_view rest) {
    auto w = words(rest);
    if (w.size() < 3 || w.size() > 4)
        throw BenchError("usage: t <grammar> <supervision> <experiments> [candidates]");
    int n = 1;
    if (w.size() == 4) {
        n = std::atoi(w[3].c_str());
        if (n < 1) throw BenchError("candidate count must be at least 1");
    }
    fs::path gpath = w[0], spath = w[1];
    Grammar g = load_sourced_grammar(gpath);
    auto pairs = load_supervision(spath);
    if (pairs.empty()) throw EmptySupervision();
    auto specs = parse_experiment_file(read_file(w[2]), false);
    if (specs.empty()) throw BenchError("experiment file has no lines");

    fs::path gsrc = workspace_ / (gpath.stem().string() + ".src");
    fs::path ssup = workspace_ / (spath.stem().string() + ".sup");
    write_src(g, gsrc);
    write_sup(pairs, ssup);

    std::vector<TrainRun> runs;
    for (const auto& s : specs) {
        TrainRun r;
        r.spec = s;
        r.grammar_path = gsrc;
        r.supervision_path = ssup;
        r.options.candidates = n;
        r.options.out_dir = fs::current_path();
        runs.push_back(std::move(r));
    }
    auto jobs = spawn_experiments(runs, workspace_);
    std::string out = std::to_string(jobs.size()) + (jobs.size() == 1 ? " job" : " jobs") + " started\n";
    for (const auto& j : jobs) {
        out += "  " + j.stem + (j.error.empty() ? " pid " + std::to_string(j.pid) : " failed: " + j.error) +
               ", status " + j.status_file.string() + "\n";
        jobs_.push_back(j);
    }
    emit(out);
}

void Session::cmd_retext(std::string_view rest) {
    fs::path arg{std::string(rest)};
    fs::path src = arg.extension() == ".src" && fs::exists(arg) ? arg : workspace_ / (arg.stem().string() + ".src");
    Grammar g = read_src(src);
    fs::path out = fs::current_path() / (src.stem().string() + ".retext.txt");
    atomic_write(out, regenerate_text(g));
    emit("re-text written to " + out.string() + "\n");
}

void Session::cmd_show(std::string_view rest) {
    if (solutions_.empty()) {
        emit("no stored analyses\n");
        return;
    }
    std::vector<std::size_t> which;
    for (const auto& w : list_arg(rest)) {
        long i = std::atol(w.c_str());
        if (i < 1 || static_cast<std::size_t>(i) > solutions_.size())
            throw BenchError("no solution " + w + " (1.." + std::to_string(solutions_.size()) + ")");
        which.push_back(static_cast<std::size_t>(i));
    }
    if (which.empty())
        for (std::size_t i = 1; i <= solutions_.size(); ++i) which.push_back(i);
    std::string out;
    for (auto i : which) {
        out += "solution " + std::to_string(i) + " of " + last_input_ + "\n";
        out += render_derivation(solutions_[i - 1], cfg_.lambda_display);
    }
    emit(out);
}

void Session::cmd_ranked(std::string_view rest) {
    if (ranked_.empty()) {
        emit("no ranked analyses (use r)\n");
        return;
    }
    if (trim(rest) == "bare") {
        emit(bare_line(ranked_input_, ranked_.front()) + "\n");
        return;
    }
    std::ostringstream out;
    out.precision(6);
    for (std::size_t i = 0; i < ranked_.size(); ++i) {
        out << "rank " << i + 1 << " p=" << std::fixed << ranked_[i].probability << " " << to_string(ranked_[i].lf)
            << "\n";
        out << render_derivation(ranked_[i].best, cfg_.lambda_display);
    }
    emit(out.str());
}

void Session::cmd_filter(std::string_view rest) {
    std::vector<std::string> cats;
    for (const auto& w : list_arg(rest)) cats.push_back(to_lower(w));
    solutions_ = filter_solutions(solutions_, cats);
    std::string out = std::to_string(solutions_.size()) + " analyses kept\n";
    for (std::size_t i = 0; i < solutions_.size(); ++i) out += summary_line(i + 1, solutions_[i]);
    emit(out);
}

void Session::cmd_inventory(std::string_view rest) {
    std::string text = report_inventory(grammar());
    if (rest.empty()) {
        emit(text);
        return;
    }
    fs::path out{std::string(rest)};
    atomic_write(out, text);
    emit("inventory written to " + out.string() + "\n");
}

void Session::cmd_by_pos(std::string_view rest) {
    std::string pos = to_lower(trim(rest));
    std::string out;
    int n = 0;
    for (const auto& e : grammar().elements()) {
        const auto* en = std::get_if<Entry>(&e);
        if (!en || en->pos != pos) continue;
        ++n;
        out += "  " + element_text(e);
        if (en->key) out += " <" + std::to_string(*en->key) + ", " + format_weight(en->weight) + ">";
        out += "\n";
    }
    emit(std::to_string(n) + " elements with pos " + pos + "\n" + out);
}

void Session::cmd_element(std::string_view rest) {
    auto e = parse_element_line(rest);
    if (!e) {
        emit("nothing to show\n");
        return;
    }
    emit(element_ir(*e) + "\n");
}

void Session::cmd_log_start(std::string_view rest) {
    auto w = words(rest);
    bool force = w.size() > 1 && w[1] == "force";
    fs::path path = w[0];
    if (path.extension() != ".log") path += ".log";
    if (fs::exists(path) && !force) throw BenchError(path.string() + " exists; add force to overwrite");
    auto log = std::make_unique<std::ofstream>(path, std::ios::trunc);
    if (!*log) throw IoError("cannot write " + path.string());
    user_log_ = std::move(log);
    emit("logging to " + path.string() + "\n");
}

void Session::cmd_log_stop() {
    if (!user_log_) {
        emit("not logging\n");
        return;
    }
    user_log_.reset();
    emit("logging stopped\n");
}

void Session::cmd_clear_workspace() {
    if (!batch_logs_.empty()) throw BenchError("/ needs interactive confirmation and is not allowed in command files");
    fs::path ws = fs::weakly_canonical(workspace_);
    if (ws == ws.root_path()) throw BenchError("refusing to clear " + ws.string());
    if (!confirm_("clear workspace " + ws.string() + "? (y/n) ")) {
        emit("workspace kept\n");
        return;
    }
    std::vector<fs::path> victims;
    for (const auto& entry : fs::directory_iterator(ws)) victims.push_back(entry.path());
    for (const auto& v : victims) fs::remove_all(v);
    emit("removed " + std::to_string(victims.size()) + " entries from " + ws.string() + "\n");
}

}  // namespace thebench
