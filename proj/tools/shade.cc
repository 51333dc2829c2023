// Copyright 2026 The Shade Authors.
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

// Operator command line:
//
//   shade ingest --input dump.xml --db shade.db
//   shade ingest --fetch --endpoint https://host/api.php --titles t.txt --db ..
//   shade annotator add alice --db shade.db
//   shade serve --db shade.db --addr 127.0.0.1:8080
//   shade stats --db shade.db
//   shade export --db shade.db --out annotations.tsv
//
// The store path comes from --db, else $SHADE_DB, else "db" in the optional
// JSON --config file, which may also set endpoint, batch_size,
// batch_delay_ms and lexicon_dir.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "shade/annostore.h"
#include "shade/error.h"
#include "shade/ingest.h"
#include "shade/service.h"
#include "shade/workflow.h"

namespace {

using shade::Error;
using shade::ErrorCode;

struct Config {
  std::string db;
  std::string endpoint;
  std::optional<size_t> batch_size;
  std::optional<int64_t> batch_delay_ms;
};

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Config LoadConfig(const std::string &path) {
  Config config;
  if (path.empty()) return config;
  nlohmann::json json =
      nlohmann::json::parse(ReadFile(path), nullptr, /*allow_exceptions=*/false);
  if (json.is_discarded() || !json.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "config " + path + " is not a JSON object");
  }
  config.db = json.value("db", "");
  config.endpoint = json.value("endpoint", "");
  if (json.contains("batch_size")) config.batch_size = json["batch_size"].get<size_t>();
  if (json.contains("batch_delay_ms")) {
    config.batch_delay_ms = json["batch_delay_ms"].get<int64_t>();
  }
  if (json.contains("lexicon_dir")) {
    setenv("SHADE_LEXICON_DIR", json["lexicon_dir"].get<std::string>().c_str(), 1);
  }
  return config;
}

std::string ResolveDb(const std::string &flag, const Config &config) {
  if (!flag.empty()) return flag;
  if (const char *env = std::getenv("SHADE_DB"); env && *env) return env;
  if (!config.db.empty()) return config.db;
  throw Error(ErrorCode::kInvalidArgument,
              "no store given: use --db, $SHADE_DB or \"db\" in --config");
}

std::vector<std::string> ReadTitles(const std::string &path) {
  std::istringstream in(ReadFile(path));
  std::vector<std::string> titles;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (!line.empty()) titles.push_back(line);
  }
  return titles;
}

shade::Service *g_service = nullptr;

void HandleSignal(int) {
  if (g_service) g_service->Stop();
}

std::string FormatFraction(std::optional<double> value) {
  if (!value) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", *value);
  return buf;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Hypernym annotation platform for MediaWiki entities"};
  app.require_subcommand(1);
  std::string config_path;
  std::string db_flag;
  app.add_option("--config", config_path, "Optional JSON config file");

  // ingest
  CLI::App *ingest = app.add_subcommand("ingest", "Load articles into the store");
  std::string input_path;
  bool fetch = false;
  std::string endpoint;
  std::string titles_path;
  size_t batch_size = 0;
  int64_t batch_delay_ms = -1;
  auto *input_opt = ingest->add_option("--input", input_path, "MediaWiki export XML file");
  auto *fetch_opt = ingest->add_flag("--fetch", fetch, "Fetch the export from an endpoint");
  ingest->add_option("--endpoint", endpoint, "api.php URL for --fetch");
  ingest->add_option("--titles", titles_path, "File with one title per line for --fetch");
  ingest->add_option("--batch-size", batch_size, "Titles per export request");
  ingest->add_option("--delay-ms", batch_delay_ms, "Pause between export requests");
  ingest->add_option("--db", db_flag, "Store file");
  input_opt->excludes(fetch_opt);

  // serve
  CLI::App *serve = app.add_subcommand("serve", "Run the HTTP API");
  std::string addr = "127.0.0.1:8080";
  serve->add_option("--db", db_flag, "Store file");
  serve->add_option("--addr", addr, "Listen address host:port");

  // annotator
  CLI::App *annotator = app.add_subcommand("annotator", "Manage annotators");
  annotator->require_subcommand(1);
  CLI::App *annotator_add = annotator->add_subcommand("add", "Register an annotator");
  std::string annotator_name;
  annotator_add->add_option("name", annotator_name, "Annotator name")->required();
  annotator_add->add_option("--db", db_flag, "Store file");
  CLI::App *annotator_list = annotator->add_subcommand("list", "List annotators");
  annotator_list->add_option("--db", db_flag, "Store file");

  // stats
  CLI::App *stats = app.add_subcommand("stats", "Print the annotation breakdown");
  stats->add_option("--db", db_flag, "Store file");

  // export
  CLI::App *export_cmd = app.add_subcommand("export", "Write annotations as TSV");
  std::string out_path;
  export_cmd->add_option("--db", db_flag, "Store file");
  export_cmd->add_option("--out", out_path, "Destination TSV file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    Config config = LoadConfig(config_path);
    shade::Store store(ResolveDb(db_flag, config));

    if (ingest->parsed()) {
      std::string xml;
      if (fetch) {
        if (endpoint.empty()) endpoint = config.endpoint;
        if (endpoint.empty() || titles_path.empty()) {
          throw Error(ErrorCode::kInvalidArgument,
                      "--fetch needs --endpoint and --titles");
        }
        shade::ingest::FetchOptions options;
        if (config.batch_size) options.batch_size = *config.batch_size;
        if (config.batch_delay_ms) {
          options.batch_delay = std::chrono::milliseconds(*config.batch_delay_ms);
        }
        if (batch_size > 0) options.batch_size = batch_size;
        if (batch_delay_ms >= 0) {
          options.batch_delay = std::chrono::milliseconds(batch_delay_ms);
        }
        xml = shade::ingest::FetchExport(ReadTitles(titles_path), endpoint, options);
      } else if (!input_path.empty()) {
        xml = ReadFile(input_path);
      } else {
        throw Error(ErrorCode::kInvalidArgument, "ingest needs --input or --fetch");
      }

      int64_t ingested = 0, redirects = 0, empty = 0;
      for (const auto &article : shade::ingest::ParseExportXml(xml)) {
        auto built = shade::ingest::BuildEntityPage(article);
        if (auto *skipped = std::get_if<shade::ingest::Skipped>(&built)) {
          ++(skipped->reason == shade::ingest::SkipReason::kRedirect ? redirects
                                                                     : empty);
          continue;
        }
        store.AddEntity(std::get<shade::EntityPage>(built));
        ++ingested;
      }
      std::cout << "ingested=" << ingested << " skipped_redirect=" << redirects
                << " skipped_empty=" << empty << "\n";
    } else if (serve->parsed()) {
      size_t colon = addr.rfind(':');
      if (colon == std::string::npos) {
        throw Error(ErrorCode::kInvalidArgument, "--addr must be host:port");
      }
      std::string host = addr.substr(0, colon);
      int port = std::stoi(addr.substr(colon + 1));
      shade::Workflow workflow(store);
      shade::Service service(store, workflow);
      g_service = &service;
      std::signal(SIGINT, HandleSignal);
      std::signal(SIGTERM, HandleSignal);
      std::cerr << "serving on " << host << ":" << port << "\n";
      bool ok = service.Listen(host, port);
      g_service = nullptr;
      if (!ok) throw Error(ErrorCode::kIoError, "cannot listen on " + addr);
    } else if (annotator_add->parsed()) {
      shade::Annotator added = store.AddAnnotator(annotator_name);
      std::cout << "annotator=" << added.name << " token=" << added.token << "\n";
    } else if (annotator_list->parsed()) {
      for (const auto &a : store.ListAnnotators()) {
        std::cout << a.id << "\t" << a.name << "\n";
      }
    } else if (stats->parsed()) {
      shade::SourceBreakdown breakdown = store.BreakdownBySource();
      std::printf("%-14s %8s %7s\n", "source", "count", "weight");
      std::printf("%-14s %8lld %7d\n", "LINKS", (long long)breakdown.links, 1);
      std::printf("%-14s %8lld %7d\n", "NOUN_PHRASES",
                  (long long)breakdown.noun_phrases, 2);
      std::printf("%-14s %8lld %7d\n", "MANUAL", (long long)breakdown.manual, 3);
      std::printf("%-14s %8lld\n", "total", (long long)breakdown.total);
      std::printf("list_fraction %s\n",
                  FormatFraction(breakdown.ListFraction()).c_str());
      std::printf("skipped %lld\n", (long long)store.SkippedCount());
      std::printf("first_link_agreement %s\n",
                  FormatFraction(store.FirstLinkAgreement()).c_str());
    } else if (export_cmd->parsed()) {
      int64_t rows = store.ExportAnnotations(out_path);
      std::cout << "exported=" << rows << "\n";
    }
  } catch (const Error &e) {
    std::cerr << "error: " << shade::ErrorCodeName(e.code()) << ": " << e.what()
              << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
