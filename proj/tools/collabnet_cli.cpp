// Copyright 2026 The collabnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command line front end. Everything goes through the C interface.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "collabnet/collabnet.h"

namespace {

struct ConfigDeleter {
  void operator()(cn_config* c) const { cn_config_free(c); }
};
using ConfigPtr = std::unique_ptr<cn_config, ConfigDeleter>;

struct Options {
  std::string config;
  std::string out;
  std::string threads;
  std::string seed;
  std::vector<std::string> overrides;
};

int report_error(cn_status s, const std::string& context) {
  std::cerr << "collabnet: " << context << ": " << cn_status_name(s);
  const std::string msg = cn_last_error();
  if (!msg.empty()) std::cerr << ": " << msg;
  std::cerr << '\n';
  return static_cast<int>(s);
}

int print_issues(cn_config* c) {
  size_t count = 0;
  if (cn_status s = cn_config_validate(c, &count); s != CN_OK) return report_error(s, "validate");
  for (size_t i = 0; i < count; ++i) {
    const char* field = nullptr;
    const char* message = nullptr;
    cn_config_issue(c, i, &field, &message);
    std::cerr << field << ": " << message << '\n';
  }
  return count == 0 ? 0 : static_cast<int>(CN_ERR_CONFIG);
}

// Builds the handle from --config plus command line overrides. Returns a
// non-zero exit code on failure.
int build_config(const Options& opt, const std::string& stages, ConfigPtr& out) {
  cn_config* raw = nullptr;
  cn_status s = opt.config.empty() ? cn_config_new(&raw) : cn_config_load(opt.config.c_str(), &raw);
  if (s != CN_OK) return report_error(s, opt.config.empty() ? "config" : opt.config);
  out.reset(raw);

  std::vector<std::pair<std::string, std::string>> sets;
  for (const auto& kv : opt.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "collabnet: --set expects section.key=value, got '" << kv << "'\n";
      return static_cast<int>(CN_ERR_INVALID_ARGUMENT);
    }
    sets.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!opt.seed.empty()) sets.emplace_back("run.seed", opt.seed);
  if (!opt.out.empty()) sets.emplace_back("run.out", opt.out);
  if (!opt.threads.empty()) sets.emplace_back("run.threads", opt.threads);
  if (!stages.empty()) sets.emplace_back("run.stages", stages);
  for (const auto& [field, value] : sets)
    if (cn_status st = cn_config_set(out.get(), field.c_str(), value.c_str()); st != CN_OK)
      return report_error(st, "--set " + field);
  return 0;
}

int run_stages(const Options& opt, const std::string& stages) {
  ConfigPtr cfg;
  if (int rc = build_config(opt, stages, cfg)) return rc;
  const cn_status s = cn_run(cfg.get());
  if (s == CN_ERR_CONFIG) {
    size_t count = 0;
    cn_config_validate(cfg.get(), &count);
    if (count > 0) {
      print_issues(cfg.get());
      return static_cast<int>(s);
    }
  }
  if (s != CN_OK) return report_error(s, "run");
  const char* json = nullptr;
  if (cn_config_report(cfg.get(), &json) == CN_OK) std::cout << json << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaboration network analysis pipeline"};
  app.set_version_flag("--version", std::string(cn_version()));
  app.require_subcommand(1);

  Options opt;
  app.add_option("-c,--config", opt.config, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", opt.seed, "master seed (run.seed)");
  app.add_option("-o,--out", opt.out, "output directory (run.out)");
  app.add_option("-j,--threads", opt.threads, "worker threads (run.threads)");
  app.add_option("--set", opt.overrides, "override a field, section.key=value")->take_all();

  struct Stage {
    const char* name;
    const char* help;
  };
  const Stage stages[] = {
      {"synth", "generate a synthetic event corpus"},
      {"ingest", "clean and deduplicate events"},
      {"graph", "build per-quarter collaboration graphs"},
      {"metrics", "centrality metrics per window"},
      {"cohesion", "density, clustering, communities and trends"},
      {"bursts", "per-contributor activity bursts"},
      {"roles", "role classification and transitions"},
      {"neural", "train the activity LSTM and the role GCN"},
      {"stats", "correlations, regression, power law and inequality"},
      {"resilience", "role removal experiments"},
  };
  std::string selected;
  for (const auto& st : stages) {
    auto* sub = app.add_subcommand(st.name, std::string(st.help) + " (and any stage it needs)");
    sub->callback([&selected, name = st.name] { selected = name; });
  }

  std::string run_stages_arg = "all";
  auto* run = app.add_subcommand("run", "run the configured stages");
  run->add_option("--stages", run_stages_arg, "comma separated stage names or 'all'");
  auto* check = app.add_subcommand("validate", "check a configuration and list every problem");
  auto* show = app.add_subcommand("config", "print the canonical configuration and its hash");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(CN_ERR_INVALID_ARGUMENT);
  }

  if (!opt.threads.empty()) {
    try {
      cn_set_threads(std::stoi(opt.threads));
    } catch (const std::exception&) {
      // left to config validation, which names the field
    }
  }

  if (*check) {
    ConfigPtr cfg;
    if (int rc = build_config(opt, "", cfg)) return rc;
    const int rc = print_issues(cfg.get());
    if (rc == 0) std::cout << "ok\n";
    return rc;
  }
  if (*show) {
    ConfigPtr cfg;
    if (int rc = build_config(opt, "", cfg)) return rc;
    size_t needed = 0;
    cn_config_canonical(cfg.get(), nullptr, 0, &needed);
    std::string text(needed, '\0');
    cn_config_canonical(cfg.get(), text.data(), text.size(), &needed);
    text.resize(needed - 1);
    uint64_t hash = 0;
    cn_config_hash(cfg.get(), &hash);
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
    std::cout << text << "# hash " << hex << '\n';
    return 0;
  }
  if (*run) return run_stages(opt, run_stages_arg);
  return run_stages(opt, selected);
}
