#include <iostream>

#include <CLI11.hpp>

#include "ee/cli/commands.hpp"

#ifndef EE_DEFAULT_DATA_DIR
#define EE_DEFAULT_DATA_DIR "data"
#endif

int main(int argc, char** argv) {
    using namespace ee::cli;
    const std::string data = EE_DEFAULT_DATA_DIR;

    CLI::App app{"eectl - explanation experience dialogue tooling"};
    app.require_subcommand(1);

    std::string fixtures_dir = data + "/fixtures";
    std::string specs_dir = data + "/specs";

    auto* validate = app.add_subcommand("validate", "Check spec files for completeness");
    std::vector<std::string> validate_paths;
    validate->add_option("paths", validate_paths, "Spec files")->required();
    validate->add_option("--fixtures-dir", fixtures_dir, "Explainer fixture corpora");

    auto* dump = app.add_subcommand("dump", "Print every field of a spec as sorted path = value lines");
    std::string dump_path;
    dump->add_option("spec", dump_path, "Spec file")->required();

    auto* simulate = app.add_subcommand("simulate", "Replay a scripted conversation headlessly");
    SimulateArgs sim;
    simulate->add_option("spec", sim.spec_path, "Spec file")->required();
    simulate->add_option("script", sim.script_path, "Script file")->required();
    simulate->add_option("--fixtures-dir", fixtures_dir, "Explainer fixture corpora");
    simulate->add_option("--trace-out", sim.trace_out, "Write the engine trace here");
    simulate->add_flag("--strict", sim.strict, "Require expectations on every event");

    auto* serve = app.add_subcommand("serve", "Run the session service over HTTP");
    ServeArgs srv;
    long idle_seconds = srv.idle_timeout.count();
    serve->add_option("--specs-dir", specs_dir, "Directory of *.xaispec.json files");
    serve->add_option("--fixtures-dir", fixtures_dir, "Explainer fixture corpora");
    serve->add_option("--listen", srv.listen, "host:port (port 0 picks a free port)");
    serve->add_option("--data-dir", srv.data_dir, "Transcript and feedback directory");
    serve->add_option("--idle-timeout", idle_seconds, "Seconds before an idle session is closed (0 disables)");

    auto* report = app.add_subcommand("report", "Print the evaluation verdict of a strategy");
    ReportArgs rep;
    report->add_option("spec", rep.spec, "Spec id or spec file")->required();
    report->add_option("--specs-dir", specs_dir, "Directory of *.xaispec.json files");
    report->add_option("--responses", rep.responses_path, "Line-delimited questionnaire responses");
    report->add_option("--data-dir", rep.data_dir, "Service data directory with transcripts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (*validate) return cmd_validate(validate_paths, fixtures_dir, std::cout, std::cerr);
    if (*dump) return cmd_dump(dump_path, std::cout, std::cerr);
    if (*simulate) {
        sim.fixtures_dir = fixtures_dir;
        return cmd_simulate(sim, std::cout, std::cerr);
    }
    if (*serve) {
        srv.specs_dir = specs_dir;
        srv.fixtures_dir = fixtures_dir;
        srv.idle_timeout = std::chrono::seconds(idle_seconds);
        return cmd_serve(srv, std::cout, std::cerr);
    }
    if (*report) {
        rep.specs_dir = specs_dir;
        if (rep.responses_path.empty() && rep.data_dir.empty()) {
            std::cerr << "report needs --responses or --data-dir\n";
            return kExitUsage;
        }
        return cmd_report(rep, std::cout, std::cerr);
    }
    return kExitUsage;
}
