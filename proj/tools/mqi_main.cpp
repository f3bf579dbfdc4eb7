#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mqi/sweep.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 1;
};

// structured error on stderr; the return value is the process exit code
int fail(const char* type, const std::string& message, int code) {
  nlohmann::ordered_json err;
  err["error"] = {{"type", type}, {"message", message}};
  std::cerr << err.dump() << "\n";
  return code;
}

int run(const std::string& subcommand, const CliOptions& opt) {
  nlohmann::ordered_json doc;
  {
    std::ifstream in(opt.config_path);
    if (!in) return fail("io", "cannot open config file: " + opt.config_path, 2);
    try {
      doc = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      return fail("config", std::string("config: ") + e.what(), 2);
    }
  }
  try {
    mqi::SweepConfig cfg = mqi::parse_sweep_config(doc);
    const bool compatible =
        subcommand == cfg.mode ||
        (subcommand == "sweep" && (cfg.mode == "tmst" || cfg.mode == "coop"));
    if (!compatible)
      return fail("config",
                  "config mode '" + cfg.mode + "' does not match subcommand '" + subcommand +
                      "'",
                  2);
    if (opt.seed_given) cfg.seed = opt.seed;
    if (!opt.format.empty()) cfg.format = opt.format;
    if (!opt.out_path.empty()) cfg.out_path = opt.out_path;

    std::string rendered;
    if (cfg.mode == "optimize") {
      if (cfg.format != "json")
        return fail("config", "optimize emits a json report; set output.format or --format to json",
                    2);
      rendered = mqi::run_optimize(cfg).dump(2) + "\n";
    } else {
      const auto res = mqi::run_sweep(cfg, opt.threads);
      rendered = cfg.format == "json" ? mqi::render_json(res) : mqi::render_csv(res);
    }

    if (cfg.out_path.empty()) {
      std::fwrite(rendered.data(), 1, rendered.size(), stdout);
    } else {
      std::ofstream out(cfg.out_path, std::ios::binary);
      if (!out) return fail("io", "cannot open output file: " + cfg.out_path, 2);
      out.write(rendered.data(), static_cast<std::streamsize>(rendered.size()));
      if (!out) return fail("io", "failed writing output file: " + cfg.out_path, 2);
    }
    return 0;
  } catch (const mqi::config_error& e) {
    return fail("config", e.what(), 2);
  } catch (const mqi::bracket_error& e) {
    return fail("domain", e.what(), 3);
  } catch (const mqi::domain_error& e) {
    return fail("domain", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum illumination advantage datasets with a lossy idler memory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mqi::library_version));

  CliOptions opt;
  const struct {
    const char* name;
    const char* desc;
  } subs[] = {
      {"sweep", "grid sweep over state (tmst) or device (coop) parameters"},
      {"optimize", "closed-form and numeric optimum side by side"},
      {"receiver", "counting-receiver advantage versus signal energy"},
      {"montecarlo", "simulated detection error versus shot count"},
      {"range", "idler memory efficiency versus fiber length"},
  };
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.desc);
    sub->add_option("--config", opt.config_path, "JSON config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_path, "output file (default: stdout)");
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", opt.seed, "override the config seed");
    sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::Range(1, 256));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("config", e.what(), 2);
  }

  const CLI::App* sub = app.get_subcommands().at(0);
  opt.seed_given = sub->count("--seed") > 0;
  return run(sub->get_name(), opt);
}
