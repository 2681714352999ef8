#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "line_editor.hpp"
#include "thebench/errors.hpp"
#include "thebench/grammar_io.hpp"
#include "thebench/session.hpp"

int main(int argc, char** argv) {
    CLI::App app{"thebench: a workbench for monadic categorial grammar"};
    std::string batch_file, workspace;
    std::vector<std::string> commands;
    bool quiet = false;
    app.add_option("--batch", batch_file, "run a command file (as @) and exit");
    app.add_option("--workspace", workspace, "workspace directory (default $THEBENCH_HOME or /var/tmp/thebench)");
    app.add_option("-c,--command", commands, "run a command and exit; repeatable");
    app.add_flag("-q,--quiet", quiet, "no welcome banner");
    CLI11_PARSE(app, argc, argv);

    if (!workspace.empty()) ::setenv("THEBENCH_HOME", workspace.c_str(), 1);
    std::filesystem::path ws;
    try {
        ws = thebench::workspace_dir();
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
    thebench::Session session(ws, std::cout);

    if (!batch_file.empty() || !commands.empty()) {
        for (const auto& c : commands)
            if (!session.dispatch(c)) return 0;
        if (!batch_file.empty()) session.dispatch("@ " + batch_file);
        return 0;
    }

    session.set_confirm([](const std::string& question) {
        auto answer = thebench::read_line(question, {});
        return answer && !answer->empty() && (answer->front() == 'y' || answer->front() == 'Y');
    });
    if (!quiet) std::cout << thebench::welcome_banner() << "workspace: " << ws.string() << "\n";
    for (;;) {
        auto line = thebench::read_line(std::string(thebench::Session::kPrompt), session.history());
        if (!line) break;
        if (!session.dispatch(*line)) break;
    }
    return 0;
}
