// tosca2occi: compiles TOSCA YAML type definitions and topology templates
// into OCCI extensions and configurations, validates them, and deploys them
// through a reconciliation-based orchestrator against a simulated runtime.

#include <iostream>

#include <CLI11.hpp>

#include "tosca2occi/mapping/config_generator.hpp"
#include "tosca2occi/mapping/type_mapper.hpp"
#include "tosca2occi/mock/http.hpp"
#include "tosca2occi/occi/validate.hpp"
#include "tosca2occi/orch/engine.hpp"
#include "tosca2occi/psm/transform.hpp"
#include "tosca2occi/tosca/parser.hpp"

namespace fs = std::filesystem;
using namespace tosca2occi;
using occi::Json;

namespace {

std::string fixtures_root() {
    if (const char* env = std::getenv("TOSCA2OCCI_FIXTURES"))
        return env;
    return "fixtures";
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const Json& doc, const std::string& out_path) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty() || out_path == "-")
        std::cout << text;
    else
        occi::write_file(out_path, text);
}

std::vector<fs::path> yaml_files_under(const fs::path& root) {
    std::vector<fs::path> files;
    if (fs::is_regular_file(root)) {
        files.push_back(root);
    } else if (fs::is_directory(root)) {
        for (const auto& entry : fs::recursive_directory_iterator(root))
            if (entry.path().extension() == ".yaml" || entry.path().extension() == ".yml")
                files.push_back(entry.path());
    } else {
        throw Error("no such file or directory: " + root.string());
    }
    std::sort(files.begin(), files.end());
    return files;
}

tosca::TypeRegistry load_registry(const std::vector<std::string>& type_paths) {
    std::vector<tosca::TypeDef> defs;
    for (const auto& p : type_paths)
        for (const auto& file : yaml_files_under(p)) {
            auto parsed = tosca::parse_types(slurp(file));
            for (const auto& w : parsed.warnings)
                std::cerr << "tosca2occi: warning: " << file.string() << ": " << w << "\n";
            defs.insert(defs.end(), parsed.types.begin(), parsed.types.end());
        }
    return tosca::TypeRegistry::build(defs);
}

occi::ExtensionSet load_extensions(const std::string& ext_dir, const std::string& tosca_ext) {
    occi::ExtensionSet set;
    occi::load_extension_directory(ext_dir, set);
    if (!tosca_ext.empty())
        occi::load_extension(tosca_ext, set);
    return set;
}

void print_report(const mapping::MappingReport& report) {
    const auto& c = report.census;
    std::cerr << "tosca2occi: census total=" << c.total << " infrastructure=" << c.infrastructure
              << " modmacao=" << c.modmacao << " sla=" << c.sla << " core=" << c.core << "\n";
    for (const auto& w : report.warnings)
        std::cerr << "tosca2occi: warning: " << w << "\n";
    for (const auto& [type, msg] : report.errors)
        std::cerr << "tosca2occi: error: type=" << type << " message=" << msg << "\n";
}

std::map<std::string, std::string> parse_inputs(const std::vector<std::string>& kvs) {
    std::map<std::string, std::string> out;
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw Error("--input expects k=v, got '" + kv + "'");
        out[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"TOSCA to OCCI toolchain: map types, generate configurations, "
                 "validate and deploy against an OCCI runtime"};
    app.require_subcommand(1);

    std::string ext_dir = fixtures_root() + "/extensions";
    std::string tosca_ext_file;
    std::string out_path;
    bool deterministic = false;
    app.add_flag("--deterministic", deterministic,
                 "zero-delay mock runtime and stable ordering");

    // parse-types
    std::vector<std::string> type_files;
    auto* cmd_types = app.add_subcommand("parse-types", "parse TOSCA type definition YAML");
    cmd_types->add_option("files", type_files, "YAML files or directories")->required();
    cmd_types->add_option("--out", out_path, "output file (default stdout)");

    // parse-topology
    std::string topo_file;
    std::vector<std::string> input_kvs;
    auto* cmd_topo = app.add_subcommand("parse-topology", "parse a TOSCA topology template");
    cmd_topo->add_option("file", topo_file, "topology YAML")->required();
    cmd_topo->add_option("--input", input_kvs, "input value k=v");
    cmd_topo->add_option("--out", out_path, "output file (default stdout)");

    // gen-extension
    std::vector<std::string> gen_type_paths;
    auto* cmd_genext = app.add_subcommand("gen-extension",
                                          "compile a type registry into the OCCI extension");
    cmd_genext->add_option("--types", gen_type_paths, "type YAML files or directories")
        ->required();
    cmd_genext->add_option("--extensions", ext_dir, "base extension directory");
    cmd_genext->add_option("--out", out_path, "output file (default stdout)");

    // gen-config
    std::string extension_file;
    std::vector<std::string> cfg_type_paths = {fixtures_root() + "/types"};
    auto* cmd_gencfg = app.add_subcommand("gen-config",
                                          "transform a topology into an OCCI configuration");
    cmd_gencfg->add_option("--topology", topo_file, "topology YAML")->required();
    cmd_gencfg->add_option("--extension", extension_file, "generated TOSCA extension JSON")
        ->required();
    cmd_gencfg->add_option("--types", cfg_type_paths,
                           "type YAML sources for requirement resolution");
    cmd_gencfg->add_option("--extensions", ext_dir, "base extension directory");
    cmd_gencfg->add_option("--input", input_kvs, "input value k=v");
    cmd_gencfg->add_option("--out", out_path, "output file (default stdout)");

    // validate
    std::string config_file;
    auto* cmd_validate = app.add_subcommand("validate", "validate a configuration");
    cmd_validate->add_option("--config", config_file, "configuration JSON")->required();
    cmd_validate->add_option("--extensions", ext_dir, "extension directory");
    cmd_validate->add_option("--extension", extension_file, "extra extension JSON");
    cmd_validate->add_option("--out", out_path, "report output file (default stdout)");

    // pim2psm
    std::string profile_file;
    auto* cmd_psm = app.add_subcommand("pim2psm", "apply the PIM to PSM transformation");
    cmd_psm->add_option("--config", config_file, "PIM configuration JSON")->required();
    cmd_psm->add_option("--profile", profile_file, "provider profile JSON")->required();
    cmd_psm->add_option("--extensions", ext_dir, "extension directory");
    cmd_psm->add_option("--extension", extension_file, "extra extension JSON");
    cmd_psm->add_option("--out", out_path, "output file (default stdout)");

    // plan / deploy / extract
    std::string desired_file, runtime_url;
    int gate_interval = 50, gate_timeout = 10000;
    auto* cmd_plan = app.add_subcommand("plan", "compute the provisioning plan against a runtime");
    cmd_plan->add_option("--desired", desired_file, "desired configuration JSON")->required();
    cmd_plan->add_option("--runtime", runtime_url, "runtime base URL")->required();
    cmd_plan->add_option("--extensions", ext_dir, "extension directory");
    cmd_plan->add_option("--extension", extension_file, "extra extension JSON");
    cmd_plan->add_option("--out", out_path, "output file (default stdout)");

    auto* cmd_deploy = app.add_subcommand("deploy", "reconcile a runtime into the desired state");
    cmd_deploy->add_option("--desired", desired_file, "desired configuration JSON")->required();
    cmd_deploy->add_option("--runtime", runtime_url, "runtime base URL")->required();
    cmd_deploy->add_option("--extensions", ext_dir, "extension directory");
    cmd_deploy->add_option("--extension", extension_file, "extra extension JSON");
    cmd_deploy->add_option("--gate-interval", gate_interval, "gate poll interval in ms");
    cmd_deploy->add_option("--gate-timeout", gate_timeout, "gate timeout in ms");
    cmd_deploy->add_option("--out", out_path, "report output file (default stdout)");

    auto* cmd_extract = app.add_subcommand("extract", "extract the runtime configuration");
    cmd_extract->add_option("--runtime", runtime_url, "runtime base URL")->required();
    cmd_extract->add_option("--out", out_path, "output file (default stdout)");

    // serve
    std::string host = "127.0.0.1";
    int port = 9000;
    int delay_ms = 20;
    auto* cmd_serve = app.add_subcommand("serve", "run the mock OCCI runtime over HTTP");
    cmd_serve->add_option("--host", host, "bind host");
    cmd_serve->add_option("--port", port, "bind port");
    cmd_serve->add_option("--delay", delay_ms, "simulated activation delay in ms");
    cmd_serve->add_option("--extensions", ext_dir, "extension directory");
    cmd_serve->add_option("--extension", extension_file, "extra extension JSON");
    cmd_serve->add_flag("--deterministic", deterministic,
                        "zero-delay mock runtime and stable ordering");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*cmd_types) {
            Json out = Json::array();
            for (const auto& p : type_files)
                for (const auto& file : yaml_files_under(p)) {
                    auto parsed = tosca::parse_types(slurp(file));
                    for (const auto& w : parsed.warnings)
                        std::cerr << "tosca2occi: warning: " << w << "\n";
                    for (const auto& t : parsed.types)
                        out.push_back(tosca::to_json(t));
                }
            emit(out, out_path);
        } else if (*cmd_topo) {
            auto topo = tosca::parse_topology(slurp(topo_file), parse_inputs(input_kvs));
            for (const auto& w : topo.warnings)
                std::cerr << "tosca2occi: warning: " << w << "\n";
            emit(tosca::to_json(topo), out_path);
        } else if (*cmd_genext) {
            auto registry = load_registry(gen_type_paths);
            auto base = load_extensions(ext_dir, "");
            auto [ext, report] =
                mapping::generate_extension(registry, mapping::RuleTable::builtin(), base);
            print_report(report);
            emit(occi::to_json(ext), out_path);
        } else if (*cmd_gencfg) {
            auto registry = load_registry(cfg_type_paths);
            auto set = load_extensions(ext_dir, extension_file);
            const occi::Extension* ext = set.find_extension("tosca");
            if (!ext)
                throw Error("--extension must name the generated TOSCA extension");
            auto topo = tosca::parse_topology(slurp(topo_file), parse_inputs(input_kvs));
            for (const auto& w : topo.warnings)
                std::cerr << "tosca2occi: warning: " << w << "\n";
            auto cfg = mapping::generate_configuration(topo, *ext, set, registry);
            emit(occi::to_json(cfg), out_path);
        } else if (*cmd_validate) {
            auto set = load_extensions(ext_dir, extension_file);
            auto cfg = occi::load_configuration(config_file);
            auto report = occi::validate_configuration(cfg, set);
            Json out;
            out["valid"] = report.ok();
            out["violations"] = Json::array();
            for (const auto& v : report.violations)
                out["violations"].push_back(
                    {{"entity", v.entity_id}, {"name", v.name}, {"message", v.message}});
            emit(out, out_path);
            return report.ok() ? 0 : 1;
        } else if (*cmd_psm) {
            auto set = load_extensions(ext_dir, extension_file);
            auto cfg = occi::load_configuration(config_file);
            auto profile = psm::load_profile(profile_file);
            emit(occi::to_json(psm::transform(cfg, profile, set)), out_path);
        } else if (*cmd_plan) {
            auto set = load_extensions(ext_dir, extension_file);
            auto desired = occi::load_configuration(desired_file);
            mock::HttpRuntimeClient client(runtime_url);
            auto current = orch::extract(client);
            auto diff = orch::compare(desired, current);
            auto graph = orch::build_graph(diff, desired, set);
            emit(orch::to_json(orch::plan(diff, graph, set)), out_path);
        } else if (*cmd_deploy) {
            auto set = load_extensions(ext_dir, extension_file);
            auto desired = occi::load_configuration(desired_file);
            mock::HttpRuntimeClient client(runtime_url);
            auto report = orch::reconcile(
                desired, client, set,
                {.interval_ms = gate_interval, .timeout_ms = gate_timeout});
            emit(report.to_json(), out_path);
            return report.conformance ? 0 : 2;
        } else if (*cmd_extract) {
            mock::HttpRuntimeClient client(runtime_url);
            emit(occi::to_json(orch::extract(client)), out_path);
        } else if (*cmd_serve) {
            auto set = load_extensions(ext_dir, extension_file);
            mock::MockRuntime runtime(set,
                                      {.activation_delay_ms = deterministic ? 0 : delay_ms,
                                       .deterministic = deterministic});
            mock::RuntimeServer server(runtime);
            std::cerr << "tosca2occi: serving mock runtime on http://" << host << ":" << port
                      << "\n";
            if (!server.serve(host, port))
                throw Error("cannot bind " + host + ":" + std::to_string(port));
        }
    } catch (const Error& e) {
        std::cerr << "tosca2occi: error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "tosca2occi: error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
