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

// Runs the built binary end to end.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "shade/annostore.h"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code;
  std::string output;  // stdout and stderr
};

RunResult Run(const std::string &args, const std::string &env = "") {
  std::string command =
      env + " \"" SHADE_CLI_PATH "\" " + args + " 2>&1";
  FILE *pipe = popen(command.c_str(), "r");
  REQUIRE(pipe);
  std::string output;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("shade_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string &name) const {
    return (path_ / name).string();
  }

 private:
  fs::path path_;
};

std::string Fixture(const std::string &name) {
  return std::string(SHADE_FIXTURE_DIR) + "/" + name;
}

TEST_CASE("ingest reports counts and is idempotent") {
  TempDir dir;
  std::string db = dir / "s.db";
  RunResult r = Run("ingest --input " + Fixture("export_small.xml") + " --db " + db);
  CHECK(r.exit_code == 0);
  CHECK(r.output == "ingested=2 skipped_redirect=1 skipped_empty=0\n");
  r = Run("ingest --input " + Fixture("export_small.xml") + " --db " + db);
  CHECK(r.exit_code == 0);
  shade::Store store(db);
  CHECK(store.EntityCount() == 2);
}

TEST_CASE("ingest of an empty dump") {
  TempDir dir;
  RunResult r = Run("ingest --input " + Fixture("export_empty.xml") + " --db " +
                    (dir / "s.db"));
  CHECK(r.exit_code == 0);
  CHECK(r.output == "ingested=0 skipped_redirect=0 skipped_empty=0\n");
}

TEST_CASE("stats on a seeded store") {
  TempDir dir;
  std::string db = dir / "s.db";
  {
    shade::Store store(db);
    shade::AnnotatorId a = store.AddAnnotator("seed").id;
    int n = 0;
    for (auto [source, count] : {std::pair{shade::Source::kLinks, 399},
                                 std::pair{shade::Source::kNounPhrases, 242},
                                 std::pair{shade::Source::kManual, 379}}) {
      for (int i = 0; i < count; ++i) {
        shade::EntityPage page;
        page.entity_name = "E" + std::to_string(n++);
        store.AddEntity(page);
        store.SaveAnnotation(store.AssignNext(a)->id, a, "x", source);
      }
    }
  }
  RunResult r = Run("stats --db " + db);
  CHECK(r.exit_code == 0);
  CHECK(r.output ==
        "source            count  weight\n"
        "LINKS               399       1\n"
        "NOUN_PHRASES        242       2\n"
        "MANUAL              379       3\n"
        "total              1020\n"
        "list_fraction 0.628\n"
        "skipped 0\n"
        "first_link_agreement 0.000\n");

  r = Run("export --db " + db + " --out " + (dir / "out.tsv"));
  CHECK(r.output == "exported=1020\n");
  std::ifstream in(dir / "out.tsv");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == 1021);
}

TEST_CASE("ingest errors") {
  TempDir dir;
  RunResult r = Run("ingest --input " + (dir / "missing.xml") + " --db " +
                    (dir / "s.db"));
  CHECK(r.exit_code == 1);
  CHECK(r.output.rfind("error: IoError:", 0) == 0);

  std::ofstream(dir / "bad.xml") << "<mediawiki><page>";
  r = Run("ingest --input " + (dir / "bad.xml") + " --db " + (dir / "s.db"));
  CHECK(r.exit_code == 1);
  CHECK(r.output.rfind("error: MalformedXml:", 0) == 0);

  r = Run("ingest --input " + Fixture("export_small.xml"), "SHADE_DB=");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("InvalidArgument") != std::string::npos);

  r = Run("bogus");
  CHECK(r.exit_code != 0);
}

TEST_CASE("annotators, stats and export") {
  TempDir dir;
  std::string db = dir / "s.db";
  REQUIRE(Run("ingest --input " + Fixture("export_utf8.xml"), "SHADE_DB=" + db)
              .exit_code == 0);

  RunResult r = Run("annotator add alice --db " + db);
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("annotator=alice token=", 0) == 0);
  CHECK(r.output.size() == std::string("annotator=alice token=\n").size() + 64);
  r = Run("annotator add alice --db " + db);
  CHECK(r.exit_code == 1);
  CHECK(r.output.rfind("error: DuplicateAnnotator:", 0) == 0);
  r = Run("annotator list --db " + db);
  CHECK(r.output == "1\talice\n");

  {
    shade::Store store(db);
    shade::AnnotatorId a = store.FindAnnotatorByName("alice")->id;
    store.SaveAnnotation(store.AssignNext(a)->id, a, "continent",
                         shade::Source::kLinks);
  }

  r = Run("stats --db " + db);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("LINKS                 1       1") != std::string::npos);
  CHECK(r.output.find("MANUAL                0       3") != std::string::npos);
  CHECK(r.output.find("list_fraction 1.000") != std::string::npos);
  CHECK(r.output.find("first_link_agreement 1.000") != std::string::npos);
  CHECK(r.output.find("skipped 0") != std::string::npos);

  std::ofstream(dir / "config.json") << R"({"db": ")" << db << R"("})";
  r = Run("--config " + (dir / "config.json") + " export --out " + (dir / "a.tsv"),
          "SHADE_DB=");
  CHECK(r.exit_code == 0);
  CHECK(r.output == "exported=1\n");
  std::ifstream in(dir / "a.tsv");
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "entity_name\tlabel\tsource\tweight\tannotator\tcreated_at");
  CHECK(row.rfind("Faerûn\tcontinent\tLINKS\t1\talice\t", 0) == 0);
  CHECK_FALSE(std::getline(in, extra));
}

TEST_CASE("--db overrides the environment") {
  TempDir dir;
  RunResult r = Run("ingest --input " + Fixture("export_small.xml") + " --db " +
                        (dir / "flag.db"),
                    "SHADE_DB=" + (dir / "env.db"));
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "flag.db"));
  CHECK_FALSE(fs::exists(dir / "env.db"));
}

}  // namespace
