// medgraph command line: load/canonicalize datasets, run queries, estimate
// a single patient's risk, run the batch monitor, or serve the HTTP API.
//
// Exit codes: 0 success, 1 warnings escalated by --strict, 2 errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "medgraph/decimal.hpp"
#include "medgraph/errors.hpp"
#include "medgraph/monitor.hpp"
#include "medgraph/ntriples.hpp"
#include "medgraph/server.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kWarnings = 1;
constexpr int kError = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw medgraph::ConfigError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// "graph=file.nq" or bare "file.nq" (default graph)
medgraph::Dataset load_data_args(const std::vector<std::string>& data_args) {
    medgraph::Dataset dataset;
    for (const std::string& arg : data_args) {
        std::size_t eq = arg.find('=');
        if (eq == std::string::npos) {
            for (medgraph::Quad& q : medgraph::parse_nquads(read_file(arg))) {
                dataset.add(std::move(q));
            }
        } else {
            medgraph::GraphName graph{medgraph::Iri(arg.substr(0, eq))};
            for (medgraph::Quad& q :
                 medgraph::parse_ntriples(read_file(arg.substr(eq + 1)), graph)) {
                dataset.add(std::move(q));
            }
        }
    }
    return dataset;
}

int cmd_load(const std::string& graph, const std::string& file) {
    std::string text = read_file(file);
    std::vector<medgraph::Quad> quads;
    if (graph == "default") {
        quads = medgraph::parse_nquads(text);
    } else {
        quads = medgraph::parse_ntriples(text, medgraph::GraphName{medgraph::Iri(graph)});
    }
    medgraph::Dataset dataset;
    for (medgraph::Quad& q : quads) dataset.add(std::move(q));
    std::cerr << "loaded " << quads.size() << " statements, " << dataset.size()
              << " distinct quads" << std::endl;
    std::cout << medgraph::serialize_canonical(dataset);
    return kOk;
}

int cmd_query(const std::string& query_file, const std::vector<std::string>& data_args,
              const std::string& config_path) {
    medgraph::Dataset dataset = load_data_args(data_args);
    if (!config_path.empty()) {
        medgraph::LoadedSystem sys = medgraph::load_system(medgraph::load_config(config_path));
        for (const auto& [name, store] : sys.stores) dataset.merge(*store);
    }
    medgraph::SelectQuery query = medgraph::parse_query(read_file(query_file));
    auto solutions = medgraph::evaluate_query(query, dataset);
    std::cout << medgraph::render_solutions_tsv(query, solutions);
    return kOk;
}

int cmd_estimate(const std::string& patient_iri, const std::string& config_path) {
    medgraph::LoadedSystem sys = medgraph::load_system(medgraph::load_config(config_path));
    medgraph::Iri patient(patient_iri);

    medgraph::EnrichResult enriched =
        medgraph::enrich_record(patient, sys.departments, sys.registry, sys.policy);
    medgraph::Dataset working = *sys.seed_store;
    working.merge(enriched.dataset);
    working = medgraph::forward_chain(sys.rules, working).dataset;

    medgraph::ExtractedObservations extracted =
        medgraph::read_observations(working, patient, sys.vocab);
    medgraph::RiskEstimate estimate = medgraph::estimate_risk(sys.model, extracted.observations);
    medgraph::RiskLevel level = medgraph::classify(estimate, sys.threshold);

    std::cout << "patient " << patient.value() << "\n";
    std::cout << "posterior " << medgraph::format_probability(estimate.posterior.value()) << " "
              << medgraph::risk_level_name(level) << " (threshold "
              << medgraph::format_probability(sys.threshold.value()) << ")\n";
    for (const medgraph::TraceStep& step : estimate.trace) {
        std::cout << "  step " << step.factor.value() << " value=" << step.value
                  << " prior=" << medgraph::format_probability(step.prior_before)
                  << " posterior=" << medgraph::format_probability(step.posterior_after) << "\n";
    }
    for (const medgraph::Observation& skipped : estimate.skipped) {
        std::cout << "  skipped " << skipped.factor.value() << " value=" << skipped.value << "\n";
    }
    for (const std::string& w : enriched.warnings) std::cerr << "warning: " << w << std::endl;
    for (const std::string& w : extracted.warnings) std::cerr << "warning: " << w << std::endl;
    return kOk;
}

int cmd_monitor(const std::string& config_path, bool strict, const std::string& out_path) {
    medgraph::MonitorOutcome outcome = medgraph::run_monitor(medgraph::load_config(config_path));
    std::string rendered = outcome.report.render();
    if (out_path.empty()) {
        std::cout << rendered;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw medgraph::ConfigError("cannot write report to " + out_path);
        out << rendered;
    }
    if (strict && !outcome.report.warnings.empty()) return kWarnings;
    return kOk;
}

int cmd_serve(const std::string& config_path, int port, const std::string& host) {
    medgraph::LoadedSystem sys = medgraph::load_system(medgraph::load_config(config_path));
    medgraph::MonitorOutcome outcome = medgraph::run_monitor(sys);
    for (const std::string& w : outcome.report.warnings) std::cerr << "warning: " << w << std::endl;

    auto snapshot = std::make_shared<const medgraph::Dataset>(std::move(outcome.dataset));
    medgraph::MonitorServer server(snapshot, outcome.report, sys.vocab);
    std::cerr << "serving on " << host << ":" << port << std::endl;
    if (!server.listen(host, port)) {
        throw medgraph::ConfigError("cannot bind " + host + ":" + std::to_string(port));
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"federated clinical risk monitor over linked department data"};
    app.require_subcommand(1);

    auto* load = app.add_subcommand("load", "parse a data file and print its canonical N-Quads");
    std::string load_graph = "default";
    std::string load_file;
    load->add_option("graph", load_graph, "target graph IRI, or 'default'")->required();
    load->add_option("file", load_file, "input .nt/.nq file")->required();

    auto* query = app.add_subcommand("query", "evaluate a query file against data files");
    std::string query_file, query_config;
    std::vector<std::string> query_data;
    query->add_option("file", query_file, "query file (.rq)")->required();
    query->add_option("--data", query_data, "data file, optionally '<graph-iri>=file'");
    query->add_option("--config", query_config, "load every store from a config file");

    auto* estimate = app.add_subcommand("estimate", "enrich one patient and estimate their risk");
    std::string estimate_iri, estimate_config;
    estimate->add_option("patient", estimate_iri, "patient IRI")->required();
    estimate->add_option("--config", estimate_config, "config file")->required();

    auto* monitor = app.add_subcommand("monitor", "run the batch monitor pipeline");
    std::string monitor_config, monitor_out;
    bool monitor_strict = false;
    monitor->add_option("--config", monitor_config, "config file")->required();
    monitor->add_option("--out", monitor_out, "write the report here instead of stdout");
    monitor->add_flag("--strict", monitor_strict, "exit 1 when the run produced warnings");

    auto* serve = app.add_subcommand("serve", "run the monitor once, then serve the HTTP API");
    std::string serve_config, serve_host = "0.0.0.0";
    int serve_port = 8080;
    serve->add_option("--config", serve_config, "config file")->required();
    serve->add_option("--port", serve_port, "TCP port")->required();
    serve->add_option("--host", serve_host, "bind address");

    CLI11_PARSE(app, argc, argv);

    try {
        if (load->parsed()) return cmd_load(load_graph, load_file);
        if (query->parsed()) return cmd_query(query_file, query_data, query_config);
        if (estimate->parsed()) return cmd_estimate(estimate_iri, estimate_config);
        if (monitor->parsed()) return cmd_monitor(monitor_config, monitor_strict, monitor_out);
        if (serve->parsed()) return cmd_serve(serve_config, serve_port, serve_host);
    } catch (const medgraph::Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kError;
    }
    return kError;
}
