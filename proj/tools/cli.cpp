#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "plot.hpp"
#include "pipescope/error.hpp"
#include "pipescope/forward_sim.hpp"
#include "pipescope/inversion.hpp"
#include "pipescope/irm.hpp"
#include "pipescope/irm_io.hpp"
#include "pipescope/network.hpp"

namespace pipescope::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

const char* kExample1 = R"({
  "wave_speed": 1000, "gravity": 9.81,
  "vertices": ["A", "B", "C", "D"],
  "pipes": [
    {"id": "AD", "from": "A", "to": "D", "length": 400, "area": 1},
    {"id": "BD", "from": "B", "to": "D", "length": 300, "area": 1},
    {"id": "DC", "from": "D", "to": "C", "length": 1000, "area": 1}
  ],
  "x0": "C", "accessible": ["A", "B"]
})";

const char* kExample2 = R"({
  "wave_speed": 1000, "gravity": 9.81,
  "vertices": ["A", "B", "C", "D", "E"],
  "pipes": [
    {"id": "AE", "from": "A", "to": "E", "length": 300, "area": 1},
    {"id": "BE", "from": "B", "to": "E", "length": 400,
     "area": {"base": 2, "blocks": [{"x0": 350, "x1": 375, "delta": -0.6}]}},
    {"id": "CE", "from": "C", "to": "E", "length": 400,
     "area": {"base": 1, "blocks": [{"x0": 210, "x1": 250, "delta": -0.2}]}},
    {"id": "ED", "from": "E", "to": "D", "length": 500,
     "area": {"base": 1, "blocks": [{"x0": 410, "x1": 450, "delta": -0.4},
                                    {"x0": 150, "x1": 250, "delta": -0.2}]}}
  ],
  "x0": "D", "accessible": ["A", "B", "C"]
})";

enum class Kind { Number, Text, NumberList, TextList, Switch };

struct OptionSpec {
  std::string flag;
  std::string key;
  Kind kind;
  std::string help;
};

struct Context {
  std::string command;
  json cfg;
  std::vector<std::string> argv;
  std::ostream& out;
  std::ostream& err;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<OptionSpec> options;
  json defaults;
  std::function<json(const std::string&)> preset;  // preset name -> values
  std::function<void(Context&)> run;
};

[[noreturn]] void config_error(const std::string& what) { throw Error(Errc::ParseError, what); }

void merge(json& dst, const json& src) {
  for (auto it = src.begin(); it != src.end(); ++it) dst[it.key()] = it.value();
}

bool has(const json& cfg, const std::string& key) {
  return cfg.contains(key) && !cfg.at(key).is_null();
}

double number(const json& cfg, const std::string& key) {
  if (!has(cfg, key)) config_error("missing setting '" + key + "'");
  if (!cfg.at(key).is_number()) config_error("setting '" + key + "' must be a number");
  return cfg.at(key).get<double>();
}

std::string text(const json& cfg, const std::string& key) {
  if (!has(cfg, key)) config_error("missing setting '" + key + "'");
  if (!cfg.at(key).is_string()) config_error("setting '" + key + "' must be a string");
  return cfg.at(key).get<std::string>();
}

bool flag(const json& cfg, const std::string& key) {
  return has(cfg, key) && cfg.at(key).is_boolean() && cfg.at(key).get<bool>();
}

std::vector<double> numbers(const json& cfg, const std::string& key) {
  if (!has(cfg, key)) config_error("missing setting '" + key + "'");
  const json& v = cfg.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) config_error("setting '" + key + "' must be a number or list of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) config_error("setting '" + key + "' must hold numbers only");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<std::string> texts(const json& cfg, const std::string& key) {
  if (!has(cfg, key)) return {};
  const json& v = cfg.at(key);
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array()) config_error("setting '" + key + "' must be a list of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) config_error("setting '" + key + "' must hold strings only");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::size_t jobs(const json& cfg) {
  if (!has(cfg, "jobs")) return 0;
  const double j = number(cfg, "jobs");
  if (j < 0 || j != std::floor(j)) config_error("jobs must be a non-negative integer");
  return static_cast<std::size_t>(j);
}

Network network(Context& ctx) {
  if (!has(ctx.cfg, "network")) config_error("missing --network (or a preset)");
  const json& v = ctx.cfg.at("network");
  if (v.is_object()) return network_from_json(v);
  const std::string path = text(ctx.cfg, "network");
  ctx.inputs.push_back(path);
  return load_network(path);
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) config_error("cannot write '" + path + "'");
  os << body;
  if (!os) config_error("failed writing '" + path + "'");
}

std::string output_dir(Context& ctx) {
  const std::string dir = text(ctx.cfg, "out");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) config_error("cannot create directory '" + dir + "': " + ec.message());
  return dir;
}

// Settings shared by every preset of one command.
json sim_defaults() {
  return {{"dx", 5.0}, {"courant", 0.95}, {"duration", 1.9}};
}

json preset_network(const std::string& name) {
  if (name == "exp1") return json::parse(kExample1);
  if (name == "exp2") return json::parse(kExample2);
  config_error("unknown preset '" + name + "' (expected exp1 or exp2)");
}

void cmd_oracle_irm(Context& ctx) {
  const Network net = network(ctx);
  const double horizon = number(ctx.cfg, "horizon");
  const double dt = number(ctx.cfg, "dt");
  const std::string out = text(ctx.cfg, "out");
  const SampledIRM irm = sample_irm(oracle_irm(net, horizon, number(ctx.cfg, "prune_eps")), dt);
  std::ostringstream body;
  write_irm(body, irm, flag(ctx.cfg, "sparse"));
  write_file(out, body.str());
  ctx.outputs.push_back(out);
  ctx.out << "oracle IRM: " << irm.leaf_count() << " leaves, " << irm.samples()
          << " samples at dt " << format_number(dt) << " s -> " << out << '\n';
}

void cmd_simulate_irm(Context& ctx) {
  const Network net = network(ctx);
  MeasurementConfig mc;
  mc.sim.dx = number(ctx.cfg, "dx");
  mc.sim.courant = number(ctx.cfg, "courant");
  mc.sim.duration = number(ctx.cfg, "duration");
  mc.resample_dt = number(ctx.cfg, "resample_dt");
  mc.smooth_window = number(ctx.cfg, "smooth_window");
  mc.jobs = jobs(ctx.cfg);
  const std::string out = text(ctx.cfg, "out");
  const SampledIRM irm = simulate_irm(net, mc);
  std::ostringstream body;
  write_irm(body, irm, flag(ctx.cfg, "sparse"));
  write_file(out, body.str());
  ctx.outputs.push_back(out);
  ctx.out << "simulated IRM: " << irm.leaf_count() << " leaves, " << irm.samples()
          << " samples at dt " << format_number(irm.dt) << " s -> " << out << '\n';
}

void cmd_reconstruct(Context& ctx) {
  const Network net = network(ctx);
  const std::string irm_path = text(ctx.cfg, "irm");
  ctx.inputs.push_back(irm_path);
  const SampledIRM irm = read_irm(irm_path);
  std::vector<std::string> leaf_ids;
  for (std::size_t v : net.accessible()) leaf_ids.push_back(net.vertices()[v]);
  if (irm.leaves != leaf_ids) config_error("IRM leaves do not match the network's accessible list");

  ReconConfig base;
  base.tau = number(ctx.cfg, "tau");
  base.dx = number(ctx.cfg, "dx");
  base.h0 = number(ctx.cfg, "h0");
  base.dt = irm.dt;
  const std::string shift = text(ctx.cfg, "shift");
  if (shift == "one-sample") {
    base.shift = KernelShift::OneSample;
  } else if (shift == "none") {
    base.shift = KernelShift::None;
  } else {
    config_error("shift must be 'one-sample' or 'none'");
  }
  const std::vector<double> lambda = numbers(ctx.cfg, "lambda");
  if (lambda.size() != 1 && lambda.size() != net.pipes().size()) {
    config_error("lambda needs one value or one per pipe (" + std::to_string(net.pipes().size()) +
                 ")");
  }
  std::vector<std::string> pipes = texts(ctx.cfg, "pipes");
  if (pipes.empty()) {
    for (const Pipe& p : net.pipes()) pipes.push_back(p.id);
  }
  std::optional<double> extent;
  if (has(ctx.cfg, "extent")) extent = number(ctx.cfg, "extent");
  const std::size_t workers = jobs(ctx.cfg);
  const std::string dir = output_dir(ctx);

  for (const std::string& id : pipes) {
    const std::size_t p = net.pipe_index(id);
    ReconConfig cfg = base;
    cfg.lambda = lambda.size() == 1 ? lambda.front() : lambda[p];
    const VolumeProfile vp = volume_profile(net, irm, p, cfg, workers, extent);
    const AreaProfile ap = area_profile(vp, cfg.dx);
    std::ostringstream vbody, abody;
    write_csv(vbody, vp);
    write_csv(abody, ap);
    const std::string vpath = (fs::path(dir) / ("volume_" + id + ".csv")).string();
    const std::string apath = (fs::path(dir) / ("area_" + id + ".csv")).string();
    write_file(vpath, vbody.str());
    write_file(apath, abody.str());
    ctx.outputs.push_back(vpath);
    ctx.outputs.push_back(apath);
    ctx.out << "pipe " << id << ": " << vp.volume.size() << " points, lambda "
            << format_number(cfg.lambda) << '\n';
  }
}

void cmd_plot(Context& ctx) {
  const std::vector<std::string> inputs = texts(ctx.cfg, "in");
  if (inputs.empty()) config_error("plot needs at least one --in CSV");
  ProfileTable table;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    ctx.inputs.push_back(inputs[k]);
    ProfileTable t = read_profile_csv(inputs[k]);
    if (k > 0 && t.kind != table.kind) config_error("cannot mix area and volume CSVs in one plot");
    table.kind = t.kind;
    for (auto& s : t.series) table.series.push_back(std::move(s));
  }
  std::optional<Network> truth;
  if (has(ctx.cfg, "truth")) {
    const json& v = ctx.cfg.at("truth");
    if (v.is_object()) {
      truth = network_from_json(v);
    } else {
      const std::string path = text(ctx.cfg, "truth");
      ctx.inputs.push_back(path);
      truth = load_network(path);
    }
  }
  const std::string out = text(ctx.cfg, "out");
  std::string title = has(ctx.cfg, "title") ? text(ctx.cfg, "title") : std::string();
  if (title.empty()) {
    title = table.kind == ProfileKind::Area ? "Cross-sectional area" : "Internal volume";
  }
  write_file(out, render_svg(table, truth ? &*truth : nullptr, title));
  ctx.outputs.push_back(out);
  ctx.out << "plot: " << table.series.size() << " panel(s) -> " << out << '\n';
}

void cmd_simulate(Context& ctx) {
  const Network net = network(ctx);
  SimConfig sc;
  sc.dx = number(ctx.cfg, "dx");
  sc.courant = number(ctx.cfg, "courant");
  sc.duration = number(ctx.cfg, "duration");
  const SimGrid grid = make_grid(sc, net.wave_speed());
  BoundaryFlow flows = closed_flow(net);
  if (has(ctx.cfg, "source")) {
    const std::size_t v = net.vertex_index(text(ctx.cfg, "source"));
    const auto slot = net.leaf_slot(v);
    if (!slot) config_error("source must be an accessible leaf");
    flows = unit_step_flow(net, grid, *slot);
  }
  const Histories hist = simulate(net, flows, sc);
  const std::string dir = output_dir(ctx);
  for (std::size_t s = 0; s < net.leaf_count(); ++s) {
    const std::string id = net.vertices()[net.accessible()[s]];
    std::ostringstream body;
    body << "t,H\n";
    for (std::size_t n = 0; n < hist.t.size(); ++n) {
      body << format_number(hist.t[n]) << ',' << format_number(hist.leaf_head[s][n]) << '\n';
    }
    const std::string path = (fs::path(dir) / ("probe_" + id + ".csv")).string();
    write_file(path, body.str());
    ctx.outputs.push_back(path);
  }
  if (flag(ctx.cfg, "field")) {
    for (std::size_t p = 0; p < net.pipes().size(); ++p) {
      const PipeField& f = hist.pipes[p];
      std::ostringstream body;
      body << "t,x,H,Q\n";
      for (std::size_t n = 0; n < hist.t.size(); ++n) {
        for (std::size_t i = 0; i < f.nodes(); ++i) {
          body << format_number(hist.t[n]) << ',' << format_number(f.x[i]) << ','
               << format_number(f.head(n, i)) << ',' << format_number(f.flow(n, i)) << '\n';
        }
      }
      const std::string path = (fs::path(dir) / ("field_" + net.pipe(p).id + ".csv")).string();
      write_file(path, body.str());
      ctx.outputs.push_back(path);
    }
  }
  ctx.out << "simulated " << hist.t.size() << " steps at dt " << format_number(hist.dt)
          << " s -> " << dir << '\n';
}

std::vector<Command> commands() {
  const OptionSpec net{"--network", "network", Kind::Text, "network JSON file"};
  const OptionSpec out_file{"--out", "out", Kind::Text, "output file"};
  const OptionSpec out_dir{"--out", "out", Kind::Text, "output directory"};
  const OptionSpec jobs_opt{"--jobs", "jobs", Kind::Number,
                            "worker threads (0 = all cores; env PIPESCOPE_JOBS)"};
  const OptionSpec sparse{"--sparse", "sparse", Kind::Switch, "omit zero kernel samples"};
  const OptionSpec dx_sim{"--dx", "dx", Kind::Number, "simulation cell length (m)"};
  const OptionSpec courant{"--courant", "courant", Kind::Number, "courant number a dt / dx"};
  const OptionSpec duration{"--duration", "duration", Kind::Number, "simulated time (s)"};

  std::vector<Command> cmds;

  cmds.push_back(
      {"oracle-irm",
       "exact delta-train IRM by wavefront tracking, binned onto a grid",
       {net,
        {"--horizon", "horizon", Kind::Number, "last arrival time kept (s)"},
        {"--dt", "dt", Kind::Number, "sampling step (s)"},
        {"--prune-eps", "prune_eps", Kind::Number, "relative amplitude below which fronts stop"},
        sparse,
        out_file},
       {{"horizon", 1.61}, {"dt", 0.01}, {"prune_eps", 1e-4}},
       [](const std::string& name) {
         json v{{"network", preset_network(name)}};
         if (name == "exp1") merge(v, {{"horizon", 1.61}, {"dt", 0.01}});
         if (name == "exp2") merge(v, {{"horizon", 1.9}, {"dt", 0.007}});
         return v;
       },
       cmd_oracle_irm});

  cmds.push_back(
      {"simulate-irm",
       "IRM from simulated unit-step responses (smooth, differentiate, resample)",
       {net, dx_sim, courant, duration,
        {"--resample-dt", "resample_dt", Kind::Number, "output step (s); 0 keeps the sim grid"},
        {"--smooth-window", "smooth_window", Kind::Number, "running-median window (s)"},
        jobs_opt, sparse, out_file},
       [] {
         json d = sim_defaults();
         merge(d, {{"resample_dt", 0.007}, {"smooth_window", 0.02}});
         return d;
       }(),
       [](const std::string& name) {
         json v{{"network", preset_network(name)}};
         merge(v, sim_defaults());
         merge(v, {{"resample_dt", name == "exp1" ? 0.01 : 0.007}, {"smooth_window", 0.02}});
         return v;
       },
       cmd_simulate_irm});

  cmds.push_back(
      {"reconstruct",
       "area profiles from an IRM file",
       {net,
        {"--irm", "irm", Kind::Text, "IRM file"},
        {"--tau", "tau", Kind::Number, "control time (s)"},
        {"--dx", "dx", Kind::Number, "reconstruction step (m)"},
        {"--lambda", "lambda", Kind::NumberList, "Tikhonov weight, one or one per pipe"},
        {"--pipes", "pipes", Kind::TextList, "pipe ids (default: all)"},
        {"--h0", "h0", Kind::Number, "target head (m)"},
        {"--shift", "shift", Kind::Text, "mirror-kernel shift: one-sample or none"},
        {"--extent", "extent", Kind::Number, "profile length (m); default: reachable length"},
        jobs_opt, out_dir},
       {{"tau", 0.8}, {"dx", 10.0}, {"lambda", {1e-5}}, {"h0", 1.0}, {"shift", "one-sample"}},
       [](const std::string& name) {
         json v{{"network", preset_network(name)}};
         if (name == "exp1") merge(v, {{"tau", 0.8}, {"dx", 10.0}, {"lambda", {1e-5}}});
         if (name == "exp2") {
           merge(v, {{"tau", 0.9}, {"dx", 7.0}, {"lambda", {1e-5, 1e-5, 1e-5, 1.0}}});
         }
         return v;
       },
       cmd_reconstruct});

  cmds.push_back({"plot",
                  "SVG of area or volume CSVs against the true network",
                  {{"--in", "in", Kind::TextList, "profile CSV files"},
                   {"--truth", "truth", Kind::Text, "network JSON with the true areas"},
                   {"--title", "title", Kind::Text, "plot title"},
                   out_file},
                  json::object(),
                  [](const std::string& name) { return json{{"truth", preset_network(name)}}; },
                  cmd_plot});

  cmds.push_back({"simulate",
                  "forward transient for a unit step at one leaf; probe and field CSVs",
                  {net,
                   {"--source", "source", Kind::Text, "accessible leaf receiving the step"},
                   dx_sim, courant, duration,
                   {"--field", "field", Kind::Switch, "also write t,x,H,Q per pipe"},
                   out_dir},
                  sim_defaults(),
                  [](const std::string& name) {
                    json v{{"network", preset_network(name)}};
                    merge(v, sim_defaults());
                    return v;
                  },
                  cmd_simulate});
  return cmds;
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::ActionTimeExceedsTau:
      return kActionTimeExceedsTau;
    case Errc::CycleDetected:
    case Errc::Disconnected:
    case Errc::DegreeTwoVertex:
    case Errc::NonLeafX0:
    case Errc::NonpositiveLength:
    case Errc::NonpositiveArea:
    case Errc::AreaNotConstantAtLeaf:
    case Errc::InvalidNetwork:
    case Errc::UnknownVertex:
    case Errc::UnknownPipe:
    case Errc::UnstableConfig:
    case Errc::MismatchedSeriesLength:
    case Errc::HorizonTooShort:
    case Errc::GridMismatch:
    case Errc::ParseError:
      return kConfigError;
    default:
      return kNumericError;
  }
}

json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) config_error("cannot open '" + path + "'");
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    config_error(path + ": " + e.what());
  }
}

int replay(const std::string& manifest_path, std::ostream& out, std::ostream& err) {
  try {
    const json m = read_json_file(manifest_path);
    if (!m.contains("argv") || !m.at("argv").is_array()) config_error("manifest has no argv");
    const auto argv = m.at("argv").get<std::vector<std::string>>();
    if (argv.size() < 2 || argv[1] == "replay") config_error("manifest argv is not replayable");
    return run_cli(argv, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<Command> cmds = commands();

  CLI::App app{"pipescope: transient simulation, impulse responses and area reconstruction "
               "for tree pipe networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  struct Store {
    std::string preset, config;
    std::map<std::string, std::string> scalar;
    std::map<std::string, std::vector<std::string>> list;
    std::map<std::string, bool> sw;
    std::map<std::string, CLI::Option*> option;
  };
  std::vector<Store> stores(cmds.size());
  std::vector<CLI::App*> subs;
  for (std::size_t c = 0; c < cmds.size(); ++c) {
    CLI::App* sub = app.add_subcommand(cmds[c].name, cmds[c].help);
    Store& st = stores[c];
    sub->add_option("--preset", st.preset, "named defaults: exp1 or exp2");
    sub->add_option("--config", st.config, "JSON file with settings (flags override it)");
    for (const OptionSpec& o : cmds[c].options) {
      CLI::Option* opt = nullptr;
      switch (o.kind) {
        case Kind::Number:
        case Kind::Text:
          opt = sub->add_option(o.flag, st.scalar[o.key], o.help);
          break;
        case Kind::NumberList:
        case Kind::TextList:
          opt = sub->add_option(o.flag, st.list[o.key], o.help)->delimiter(',');
          break;
        case Kind::Switch:
          opt = sub->add_flag(o.flag, st.sw[o.key], o.help);
          break;
      }
      st.option[o.key] = opt;
    }
    subs.push_back(sub);
  }
  std::string manifest_path;
  CLI::App* replay_cmd = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replay_cmd->add_option("--manifest", manifest_path, "manifest.json written by a previous run")
      ->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }
  if (replay_cmd->parsed()) return replay(manifest_path, out, err);

  std::size_t c = 0;
  while (!subs[c]->parsed()) ++c;
  const Command& cmd = cmds[c];
  const Store& st = stores[c];

  Context ctx{cmd.name, cmd.defaults, args, out, err, {}, {}};
  try {
    if (!st.preset.empty()) merge(ctx.cfg, cmd.preset(st.preset));
    if (!st.config.empty()) {
      const json file = read_json_file(st.config);
      if (!file.is_object()) config_error(st.config + ": expected a JSON object");
      for (const OptionSpec& o : cmd.options) {
        if (file.contains(o.key)) ctx.cfg[o.key] = file.at(o.key);
      }
      if (file.contains(cmd.name) && file.at(cmd.name).is_object()) {
        merge(ctx.cfg, file.at(cmd.name));
      }
      ctx.inputs.push_back(st.config);
    }
    if (st.option.count("jobs")) {
      if (const char* env = std::getenv("PIPESCOPE_JOBS"); env && *env) {
        ctx.cfg["jobs"] = parse_number(env);
      }
    }
    for (const OptionSpec& o : cmd.options) {
      if (st.option.at(o.key)->count() == 0) continue;
      switch (o.kind) {
        case Kind::Number:
          ctx.cfg[o.key] = parse_number(st.scalar.at(o.key));
          break;
        case Kind::Text:
          ctx.cfg[o.key] = st.scalar.at(o.key);
          break;
        case Kind::NumberList: {
          json arr = json::array();
          for (const auto& s : st.list.at(o.key)) arr.push_back(parse_number(s));
          ctx.cfg[o.key] = arr;
          break;
        }
        case Kind::TextList:
          ctx.cfg[o.key] = st.list.at(o.key);
          break;
        case Kind::Switch:
          ctx.cfg[o.key] = st.sw.at(o.key);
          break;
      }
    }

    cmd.run(ctx);

    json manifest;
    manifest["tool"] = "pipescope";
    manifest["version"] = kVersion;
    manifest["command"] = cmd.name;
    manifest["argv"] = args;
    manifest["inputs"] = ctx.inputs;
    manifest["config"] = ctx.cfg;
    manifest["outputs"] = ctx.outputs;
    manifest["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const fs::path out_path(text(ctx.cfg, "out"));
    const fs::path manifest_file = fs::is_directory(out_path)
                                       ? out_path / "manifest.json"
                                       : fs::path(out_path.string() + ".manifest.json");
    write_file(manifest_file.string(), manifest.dump(2) + "\n");
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericError;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run_cli(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace pipescope::cli
