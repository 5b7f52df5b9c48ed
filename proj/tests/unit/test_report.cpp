#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <depsniff/errors.hpp>
#include <depsniff/report.hpp>

#include "support/gitfix.hpp"
#include "support/tmpdir.hpp"

using namespace depsniff;
using nlohmann::ordered_json;

namespace {

ScanConfig config_for(const std::filesystem::path& root) {
  ScanConfig c;
  c.root = root;
  return c;
}

void write_smelly_project(const std::filesystem::path& root) {
  testfs::write_file(root / "package.json", R"({
    "name": "smelly",
    "dependencies": {
      "pin": "1.2.3",
      "wide": "*",
      "fine": "^2.0.0",
      "dormant": "^3.0.0"
    }
  })");
  testfs::write_file(root / "index.js",
                     "require('pin');\nrequire('wide');\nrequire('fine');\n"
                     "require('ghost');\n");
}

}  // namespace

TEST_CASE("scan reports carry schema, label and sorted findings") {
  testfs::TempDir dir;
  write_smelly_project(dir.path());
  auto report = run_scan(config_for(dir.path()));
  CHECK(report.schema_version == "1");
  CHECK(report.project == "smelly");
  CHECK(report.root == dir.path().string());
  CHECK(report.dep_count == 4);
  CHECK_FALSE(report.lockfile_present);
  REQUIRE(report.findings.size() == 5);
  CHECK(std::is_sorted(report.findings.begin(), report.findings.end()));
  CHECK(report.findings[0].smell == Smell::PinnedDependency);
  CHECK(report.generated_at.empty());
}

TEST_CASE("the project label falls back to the directory name") {
  testfs::TempDir dir;
  testfs::write_file(dir.path() / "package.json",
                     R"({"dependencies":{"a":"^1.0.0"}})");
  testfs::write_file(dir.path() / "package-lock.json", "{}");
  testfs::write_file(dir.path() / "i.js", "require('a');\n");
  auto report = run_scan(config_for(dir.path()));
  CHECK(report.project == dir.path().filename().string());
}

TEST_CASE("the smell filter trims findings and the summary follows") {
  testfs::TempDir dir;
  write_smelly_project(dir.path());
  auto cfg = config_for(dir.path());
  cfg.smell_filter = {Smell::PinnedDependency, Smell::NoLockfile};
  auto report = run_scan(cfg);
  REQUIRE(report.findings.size() == 2);
  CHECK(report.findings[0].smell == Smell::PinnedDependency);
  CHECK(report.findings[1].smell == Smell::NoLockfile);
  CHECK(report.summary.count(Smell::PermissiveConstraint) == 0);
  CHECK(report.summary.distinct_smells.size() == 2);

  auto j = ordered_json::parse(emit_scan_json(report, cfg.smell_filter));
  CHECK(j["findings"].size() == 2);
  CHECK(j["summary"]["ratios"].contains("S1"));
  CHECK_FALSE(j["summary"]["ratios"].contains("S4"));
}

TEST_CASE("scan json has the documented shape") {
  testfs::TempDir dir;
  write_smelly_project(dir.path());
  auto cfg = config_for(dir.path());
  auto report = run_scan(cfg);
  auto j = ordered_json::parse(emit_scan_json(report, cfg.smell_filter));

  CHECK(j["schema_version"] == "1");
  CHECK_FALSE(j.contains("generated_at"));
  CHECK(j["project"] == "smelly");
  CHECK(j["dependency_count"] == 4);
  CHECK(j["lockfile_present"] == false);

  std::vector<std::string> keys;
  for (auto& [key, value] : j.items()) keys.push_back(key);
  CHECK(keys == std::vector<std::string>{"schema_version", "project", "root",
                                         "dependency_count",
                                         "lockfile_present", "findings",
                                         "summary", "diagnostics"});

  const auto& first = j["findings"][0];
  CHECK(first["smell"] == "S1");
  CHECK(first["name"] == "pinned-dependency");
  CHECK(first["dependency"] == "pin");
  CHECK(first["constraint"] == "1.2.3");

  // S5 nulls its dependency and constraint; S7 nulls the constraint only
  for (const auto& f : j["findings"]) {
    if (f["smell"] == "S5") {
      CHECK(f["dependency"].is_null());
      CHECK(f["constraint"].is_null());
    }
    if (f["smell"] == "S7") {
      CHECK(f["dependency"] == "ghost");
      CHECK(f["constraint"].is_null());
      CHECK(f["evidence"] == "index.js:4");
    }
  }

  CHECK(j["summary"]["counts"]["S1"] == 1);
  CHECK_FALSE(j["summary"]["counts"].contains("S2"));
  CHECK(j["summary"]["distinct_count"] == 5);
  CHECK(j["summary"]["ratios"]["S1"]["count"] == 1);
  CHECK(j["summary"]["ratios"]["S1"]["denominator"] == 4);
  CHECK(j["summary"]["ratios"]["S1"]["percent"] == "25.0");
  CHECK(j["summary"]["ratios"]["S7"]["denominator"] == 5);
}

TEST_CASE("timestamps appear only on request") {
  testfs::TempDir dir;
  write_smelly_project(dir.path());
  auto cfg = config_for(dir.path());
  cfg.timestamped = true;
  auto report = run_scan(cfg);
  REQUIRE_FALSE(report.generated_at.empty());
  auto j = ordered_json::parse(emit_scan_json(report, cfg.smell_filter));
  CHECK(j.contains("generated_at"));
  std::string stamp = j["generated_at"].get<std::string>();
  CHECK(stamp.size() == 20);
  CHECK(stamp.back() == 'Z');
  CHECK(stamp[4] == '-');
  CHECK(stamp[10] == 'T');
}

TEST_CASE("scan csv quotes fields that need it") {
  ProjectReport report;
  report.findings.push_back({Smell::UnusedDependency, "weird,name",
                             "^1.0.0 || ^2.0.0", "declared but \"never\" imported"});
  report.findings.push_back(
      {Smell::MissingDependency, "plain", "", "src/a.js:3"});
  std::string csv = emit_scan_csv(report);
  CHECK(csv ==
        "smell,dependency,constraint,evidence\n"
        "S6,\"weird,name\",^1.0.0 || ^2.0.0,"
        "\"declared but \"\"never\"\" imported\"\n"
        "S7,plain,,src/a.js:3\n");
}

TEST_CASE("text output lists findings with their evidence") {
  testfs::TempDir dir;
  write_smelly_project(dir.path());
  auto cfg = config_for(dir.path());
  auto text = emit_scan_text(run_scan(cfg));
  CHECK(text.find("project: smelly\n") != std::string::npos);
  CHECK(text.find("lockfile: missing\n") != std::string::npos);
  CHECK(text.find("findings (5):\n") != std::string::npos);
  CHECK(text.find("S1 pinned-dependency pin \"1.2.3\"") != std::string::npos);
  CHECK(text.find("S7 missing-dependency ghost [index.js:4]") !=
        std::string::npos);
}

TEST_CASE("badge status reflects filtered findings") {
  testfs::TempDir dir;
  write_smelly_project(dir.path());
  auto cfg = config_for(dir.path());
  CHECK(badge_status(run_scan(cfg)) == "infected");
  cfg.smell_filter = {Smell::UrlDependency};
  CHECK(badge_status(run_scan(cfg)) == "clean");
}

TEST_CASE("fail-on matching consults the filtered findings") {
  std::vector<SmellFinding> findings = {
      {Smell::PinnedDependency, "a", "1.0.0", ""}};
  CHECK(hits_fail_on(findings, {Smell::PinnedDependency}));
  CHECK_FALSE(hits_fail_on(findings, {Smell::UrlDependency}));
  CHECK_FALSE(hits_fail_on({}, all_smells()));
}

TEST_CASE("diagnostics come out sorted") {
  testfs::TempDir dir;
  testfs::write_file(dir.path() / "package.json", R"({
    "name": "diag",
    "dependencies": {"z-tag": "latest", "a-tag": "next"}
  })");
  testfs::write_file(dir.path() / "package-lock.json", "{}");
  testfs::write_file(dir.path() / "i.js",
                     "require('z-tag');require('a-tag');\n");
  auto report = run_scan(config_for(dir.path()));
  REQUIRE(report.diagnostics.size() == 2);
  CHECK(report.diagnostics[0] <= report.diagnostics[1]);
  CHECK(report.diagnostics[0].rfind("dependency \"a-tag\"", 0) == 0);
}

TEST_CASE("history reports serialize revisions and transitions") {
  testfs::TempDir dir;
  auto repo = dir.path() / "repo";
  testgit::init_repo(repo);
  testgit::commit_manifest(repo,
                           R"({"name":"h","dependencies":{"a":"1.0.0"}})",
                           "2021-01-10T12:00:00+00:00", "pin");
  auto c2 = testgit::commit_manifest(
      repo, R"({"name":"h","dependencies":{"a":"^1.0.0"}})",
      "2021-03-11T09:00:00+00:00", "unpin");

  ProcessGitClient client;
  auto report = run_history(config_for(repo), client);
  CHECK(report.project == "h");

  auto j = ordered_json::parse(emit_history_json(report));
  CHECK(j["schema_version"] == "1");
  CHECK(j["revision_count"] == 2);
  CHECK(j["first_month"] == "2021-01");
  CHECK(j["totals"]["S1"]["introduced"] == 0);
  CHECK(j["totals"]["S1"]["fixed"] == 1);
  REQUIRE(j["transitions"].size() == 1);
  CHECK(j["transitions"][0]["commit"] == c2);
  CHECK(j["transitions"][0]["month"] == "2021-03");
  CHECK(j["transitions"][0]["event"] == "fixed");
  CHECK(j["transitions"][0]["before"] == "1.0.0");
  CHECK(j["transitions"][0]["after"] == "^1.0.0");
  REQUIRE(j["timeline"].size() == 1);
  CHECK(j["timeline"][0]["accumulation"] == -1);

  std::string csv = emit_history_csv(report);
  CHECK(csv ==
        "smell,month,introduced,fixed,accumulation\n"
        "S1,2021-03,0,1,-1\n");

  std::string text = emit_history_text(report);
  CHECK(text.find("S1 introduced=0 fixed=1") != std::string::npos);
}

TEST_CASE("history date window flags pass through") {
  testfs::TempDir dir;
  auto repo = dir.path() / "repo";
  testgit::init_repo(repo);
  testgit::commit_manifest(repo, R"({"dependencies":{"a":"1.0.0"}})",
                           "2021-01-10T12:00:00+00:00", "jan");
  testgit::commit_manifest(repo, R"({"dependencies":{"a":"^1.0.0"}})",
                           "2021-02-10T12:00:00+00:00", "feb");

  auto cfg = config_for(repo);
  cfg.until = "2021-01-31";
  ProcessGitClient client;
  auto clipped = run_history(cfg, client);
  CHECK(clipped.result.revisions.size() == 1);

  // the until date is inclusive through its final second
  cfg.until = "2021-02-10";
  auto inclusive = run_history(cfg, client);
  CHECK(inclusive.result.revisions.size() == 2);
}

TEST_CASE("corpus runs aggregate projects in name order") {
  testfs::TempDir dir;
  auto corpus_root = dir.path();

  testfs::write_file(corpus_root / "beta" / "package.json",
                     R"({"dependencies":{"x":"1.0.0"}})");
  testfs::write_file(corpus_root / "beta" / "package-lock.json", "{}");
  testfs::write_file(corpus_root / "beta" / "i.js", "require('x');\n");

  testfs::write_file(corpus_root / "alpha" / "package.json",
                     R"({"dependencies":{"y":"^1.0.0"}})");
  testfs::write_file(corpus_root / "alpha" / "i.js", "require('y');\n");

  // excluded: no manifest at all
  std::filesystem::create_directories(corpus_root / "not-a-project");
  // excluded: no runtime dependencies
  testfs::write_file(corpus_root / "empty" / "package.json",
                     R"({"name":"empty"})");
  // excluded: malformed manifest
  testfs::write_file(corpus_root / "broken" / "package.json", "{nope");

  auto corpus = run_corpus(config_for(corpus_root));
  REQUIRE(corpus.projects.size() == 2);
  CHECK(corpus.projects[0].root == "alpha");
  CHECK(corpus.projects[1].root == "beta");
  CHECK(corpus.projects[0].project == "alpha");

  CHECK(corpus.prevalence[Smell::PinnedDependency].projects == 1);
  CHECK(corpus.prevalence[Smell::NoLockfile].projects == 1);
  CHECK(corpus.histogram[0] == 0);
  CHECK(corpus.histogram[1] == 2);
  CHECK(corpus.cooccurrence.lock_pinned == 1);
  CHECK(corpus.cooccurrence.nolock_unpinned == 1);

  REQUIRE(corpus.diagnostics.size() == 3);
  CHECK(corpus.diagnostics[0] == "excluding empty: no runtime dependencies");
  CHECK(corpus.diagnostics[1].rfind("skipping broken:", 0) == 0);
  CHECK(corpus.diagnostics[2] == "skipping not-a-project: no package.json");

  auto j = ordered_json::parse(emit_corpus_json(corpus, all_smells()));
  CHECK(j["project_count"] == 2);
  CHECK(j["projects"][0]["project"] == "alpha");
  CHECK(j["prevalence"]["S1"]["projects"] == 1);
  CHECK(j["prevalence"]["S1"]["percent"] == "50.0");
  CHECK(j["distinct_histogram"]["1"] == 2);
  CHECK(j["cooccurrence"]["lock_and_pinned"] == 1);
  CHECK(j["ratio_distributions"]["S1"][0]["project"] == "beta");
  CHECK(j["ratio_distributions"]["S1"][0]["percent"] == "100.0");
  CHECK_FALSE(j.contains("accumulation"));

  std::string csv = emit_corpus_csv(corpus);
  CHECK(csv.find("prevalence,S1,projects,1\n") != std::string::npos);
  CHECK(csv.find("histogram,,1,2\n") != std::string::npos);
  CHECK(csv.find("cooccurrence,,lock_and_pinned,1\n") != std::string::npos);
  CHECK(csv.find("ratio,S1,beta,100.0\n") != std::string::npos);

  std::string text = emit_corpus_text(corpus);
  CHECK(text.find("(2 projects)") != std::string::npos);
  CHECK(text.find("S1 pinned-dependency: 1 (50.0%)") != std::string::npos);
}

TEST_CASE("an unusable corpus directory raises") {
  testfs::TempDir dir;
  CHECK_THROWS_AS(run_corpus(config_for(dir.path() / "nope")), IoError);
  // a directory with no usable projects is an empty corpus
  std::filesystem::create_directories(dir.path() / "corpus");
  CHECK_THROWS_AS(run_corpus(config_for(dir.path() / "corpus")), EmptyCorpus);
}

TEST_CASE("corpus history mining feeds the accumulation block") {
  testfs::TempDir dir;
  auto corpus_root = dir.path();

  auto repo = corpus_root / "proj-a";
  testgit::init_repo(repo);
  testgit::commit_manifest(repo,
                           R"({"name":"proj-a","dependencies":{"a":"^1.0.0"}})",
                           "2021-01-10T12:00:00+00:00", "base");
  testgit::commit_manifest(repo,
                           R"({"name":"proj-a","dependencies":{"a":"1.0.0"}})",
                           "2021-02-10T12:00:00+00:00", "pin");
  testfs::write_file(repo / "i.js", "require('a');\n");
  testgit::git(repo, {"add", "i.js"});
  testgit::git(repo, {"commit", "-q", "--date", "2021-02-11T12:00:00+00:00",
                      "-m", "code"});
  testfs::write_file(repo / "package-lock.json", "{}");

  testfs::write_file(corpus_root / "proj-b" / "package.json",
                     R"({"dependencies":{"b":"^2.0.0"}})");
  testfs::write_file(corpus_root / "proj-b" / "package-lock.json", "{}");
  testfs::write_file(corpus_root / "proj-b" / "i.js", "require('b');\n");

  auto cfg = config_for(corpus_root);
  cfg.with_history = true;
  auto corpus = run_corpus(cfg);
  REQUIRE(corpus.projects.size() == 2);
  CHECK(corpus.has_accumulation);
  REQUIRE(corpus.accumulation.count(Smell::PinnedDependency) == 1);
  const auto& points = corpus.accumulation[Smell::PinnedDependency];
  REQUIRE(points.size() == 2);
  CHECK(points[0].total == 0);
  CHECK(points[0].active_projects == 1);
  CHECK(points[1].total == 1);
  CHECK(points[1].active_projects == 1);

  bool noted = false;
  for (const auto& d : corpus.diagnostics)
    if (d == "no version control history for proj-b") noted = true;
  CHECK(noted);

  auto j = ordered_json::parse(emit_corpus_json(corpus, all_smells()));
  CHECK(j["accumulation"]["S1"][1]["mean"] == "1.0");
}

TEST_CASE("corpus worker count does not change the serialized report") {
  testfs::TempDir dir;
  for (int i = 0; i < 5; ++i) {
    auto p = dir.path() / ("p" + std::to_string(i));
    testfs::write_file(p / "package.json",
                       R"({"dependencies":{"d":")" +
                           std::string(i % 2 ? "1.0.0" : "^1.0.0") + "\"}}");
    testfs::write_file(p / "i.js", "require('d');\n");
  }
  auto cfg1 = config_for(dir.path());
  cfg1.jobs = 1;
  auto cfg3 = config_for(dir.path());
  cfg3.jobs = 3;
  CHECK(emit_corpus_json(run_corpus(cfg1), all_smells()) ==
        emit_corpus_json(run_corpus(cfg3), all_smells()));
  CHECK(emit_corpus_csv(run_corpus(cfg1)) == emit_corpus_csv(run_corpus(cfg3)));
}
