#include "ricci/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace {

std::string slurp(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream f(path);
    if (!f) throw ricci::Error("cli_io", "cannot read config \"" + path + "\"");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

ricci::RunConfig load(const std::string& path, const std::vector<std::string>& overrides) {
    std::string text = slurp(path);
    for (const auto& o : overrides) text += "\n" + o;
    return ricci::parse_config(text, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ricci flow on cylinders with fixed boundary geodesic curvature"};
    app.require_subcommand(1);
    std::string config;
    std::vector<std::string> overrides;
    auto common = [&](CLI::App* sub) {
        sub->add_option("config", config, "config file (key = value lines, - for stdin)")->required();
        sub->add_option("--set", overrides, "extra `key=value` line, applied after the file");
    };

    auto* run = app.add_subcommand("run", "simulate and write the trace CSV");
    common(run);

    auto* ver = app.add_subcommand("verify", "run the theorem checkers and report verdicts");
    common(ver);
    std::string suite = "all";
    ver->add_option("--suite", suite, "conservation | asymptotic | lemmas | all");

    auto* conv = app.add_subcommand("convergence", "self-convergence study over n, 2n, 4n, ...");
    common(conv);
    int levels = 3;
    conv->add_option("--levels", levels, "number of grid levels (>= 3)");

    auto* sw = app.add_subcommand("sweep", "one run per value of a config key");
    common(sw);
    std::string key;
    std::vector<std::string> values;
    sw->add_option("--key", key, "config key to vary")->required();
    sw->add_option("--values", values, "values, comma separated")->required()->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        const ricci::RunConfig cfg = load(config, overrides);
        if (*run) return ricci::command_run(cfg, std::cout, std::cerr);
        if (*ver) {
            const auto rep = ricci::verify(cfg, ricci::parse_suite(suite));
            ricci::print_report(rep, std::cout);
            return rep.exit_status();
        }
        if (*conv) {
            ricci::print_convergence(ricci::convergence_study(cfg, levels), std::cout);
            return 0;
        }
        if (*sw) {
            int status = 0;
            for (const auto& e : ricci::sweep(cfg, key, values)) {
                std::cout << key << "=" << e.value << " -> " << e.path << ": " << e.summary << '\n';
                if (!e.completed) status = 1;
            }
            return status;
        }
    } catch (const ricci::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
