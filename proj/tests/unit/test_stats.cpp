#include <catch2/catch_amalgamated.hpp>

#include <depsniff/errors.hpp>
#include <depsniff/stats.hpp>

using namespace depsniff;

namespace {

ProjectSummary summary_of(const std::string& name, std::size_t deps,
                          bool lock,
                          std::vector<std::pair<Smell, std::size_t>> counts) {
  std::vector<SmellFinding> findings;
  for (auto [smell, n] : counts)
    for (std::size_t i = 0; i < n; ++i)
      findings.push_back({smell, "d" + std::to_string(i), "", ""});
  return project_smell_summary(name, deps, lock, findings);
}

}  // namespace

TEST_CASE("percentages carry one decimal and round half up") {
  CHECK(percent_text({463, 887}) == "52.2");
  CHECK(percent_text({1, 2}) == "50.0");
  CHECK(percent_text({1, 3}) == "33.3");
  CHECK(percent_text({2, 3}) == "66.7");
  CHECK(percent_text({1, 6}) == "16.7");
  CHECK(percent_text({0, 10}) == "0.0");
  CHECK(percent_text({10, 10}) == "100.0");
  CHECK(percent_text({1, 800}) == "0.1");    // 0.125 rounds up
  CHECK(percent_text({1, 1600}) == "0.1");   // 0.0625 rounds up
  CHECK(percent_text({1, 2000}) == "0.1");   // 0.05 is a half: up
  CHECK(percent_text({1, 4000}) == "0.0");   // 0.025 rounds down
  CHECK(percent_text({3, 8}) == "37.5");
  CHECK(percent_text({7, 8}) == "87.5");
  CHECK(percent_text({5, 8}) == "62.5");
}

TEST_CASE("signed means render with one decimal") {
  CHECK(detail::mean_text(7, 2) == "3.5");
  CHECK(detail::mean_text(-7, 2) == "-3.5");
  CHECK(detail::mean_text(0, 5) == "0.0");
  CHECK(detail::mean_text(-1, 100) == "0.0");  // -0.01 rounds to zero, unsigned
  CHECK(detail::mean_text(1, 3) == "0.3");
  CHECK(detail::mean_text(-1, 3) == "-0.3");
  CHECK(detail::mean_text(5, 0) == "0.0");
}

TEST_CASE("summaries fold findings into counts and distinct sets") {
  auto s = summary_of("p", 4, false,
                      {{Smell::PinnedDependency, 2},
                       {Smell::NoLockfile, 1},
                       {Smell::MissingDependency, 1}});
  CHECK(s.dep_count == 4);
  CHECK(s.count(Smell::PinnedDependency) == 2);
  CHECK(s.pinned_count == 2);
  CHECK(s.missing_count == 1);
  CHECK(s.distinct_smells.size() == 3);
  CHECK(s.count(Smell::UrlDependency) == 0);
}

TEST_CASE("pinned and unpinned membership come from the pin count") {
  auto all_pinned = summary_of("a", 2, true, {{Smell::PinnedDependency, 2}});
  CHECK(all_pinned.has_pinned());
  CHECK_FALSE(all_pinned.has_unpinned());

  auto mixed = summary_of("b", 3, true, {{Smell::PinnedDependency, 1}});
  CHECK(mixed.has_pinned());
  CHECK(mixed.has_unpinned());

  auto none = summary_of("c", 3, true, {});
  CHECK_FALSE(none.has_pinned());
  CHECK(none.has_unpinned());

  // zero dependencies: neither pinned nor unpinned
  auto empty = summary_of("d", 0, true, {});
  CHECK_FALSE(empty.has_pinned());
  CHECK_FALSE(empty.has_unpinned());
}

TEST_CASE("smell ratios use the right denominators") {
  auto s = summary_of("p", 4, false,
                      {{Smell::PinnedDependency, 2},
                       {Smell::NoLockfile, 1},
                       {Smell::MissingDependency, 1}});
  auto pinned = smell_ratio(s, Smell::PinnedDependency);
  CHECK(pinned.num == 2);
  CHECK(pinned.den == 4);
  // missing dependencies widen the denominator to declared + missing
  auto missing = smell_ratio(s, Smell::MissingDependency);
  CHECK(missing.num == 1);
  CHECK(missing.den == 5);
  // the lockfile ratio is binary
  auto lock = smell_ratio(s, Smell::NoLockfile);
  CHECK(lock.num == 1);
  CHECK(lock.den == 1);
  auto with_lock = summary_of("q", 4, true, {});
  CHECK(smell_ratio(with_lock, Smell::NoLockfile).num == 0);
}

TEST_CASE("ratios over zero dependencies are undefined") {
  auto s = summary_of("p", 0, true, {});
  CHECK_THROWS_AS(smell_ratio(s, Smell::PinnedDependency), ZeroDependencies);
  CHECK_THROWS_AS(smell_ratio(s, Smell::MissingDependency), ZeroDependencies);
  CHECK_NOTHROW(smell_ratio(s, Smell::NoLockfile));
  // a missing import gives the S7 ratio a denominator even with no declarations
  auto only_missing =
      summary_of("q", 0, true, {{Smell::MissingDependency, 1}});
  auto r = smell_ratio(only_missing, Smell::MissingDependency);
  CHECK(r.num == 1);
  CHECK(r.den == 1);
}

TEST_CASE("prevalence counts projects, not findings") {
  std::vector<ProjectSummary> corpus = {
      summary_of("a", 3, true, {{Smell::PinnedDependency, 3}}),
      summary_of("b", 3, true, {{Smell::PinnedDependency, 1}}),
      summary_of("c", 3, false, {{Smell::NoLockfile, 1}}),
  };
  auto table = prevalence_table(corpus);
  CHECK(table[Smell::PinnedDependency].projects == 2);
  CHECK(table[Smell::PinnedDependency].share.num == 2);
  CHECK(table[Smell::PinnedDependency].share.den == 3);
  CHECK(table[Smell::NoLockfile].projects == 1);
  CHECK(table[Smell::UrlDependency].projects == 0);
  CHECK(percent_text(table[Smell::PinnedDependency].share) == "66.7");
}

TEST_CASE("the lockfile-pinning table counts overlapping membership") {
  std::vector<ProjectSummary> corpus = {
      // lock, mixed: pinned and unpinned
      summary_of("a", 3, true, {{Smell::PinnedDependency, 1}}),
      // lock, no pins
      summary_of("b", 2, true, {}),
      // no lock, all pinned
      summary_of("c", 2, false, {{Smell::PinnedDependency, 2}}),
      // no lock, no pins
      summary_of("d", 2, false, {}),
  };
  auto table = cooccurrence_lock_pinned(corpus);
  CHECK(table.lock_pinned == 1);
  CHECK(table.lock_unpinned == 2);
  CHECK(table.nolock_pinned == 1);
  CHECK(table.nolock_unpinned == 1);
}

TEST_CASE("the histogram buckets by distinct smell count") {
  std::vector<ProjectSummary> corpus = {
      summary_of("a", 3, true, {}),
      summary_of("b", 3, true, {{Smell::PinnedDependency, 3}}),
      summary_of("c", 3, false,
                 {{Smell::PinnedDependency, 1},
                  {Smell::NoLockfile, 1},
                  {Smell::UrlDependency, 1}}),
  };
  auto histogram = distinct_smell_histogram(corpus);
  CHECK(histogram[0] == 1);
  CHECK(histogram[1] == 1);
  CHECK(histogram[3] == 1);
  CHECK(histogram[2] == 0);
  CHECK(histogram[7] == 0);
}

TEST_CASE("ratio distributions cover only affected projects") {
  std::vector<ProjectSummary> corpus = {
      summary_of("a", 4, true, {{Smell::PinnedDependency, 2}}),
      summary_of("b", 5, true, {}),
      summary_of("c", 2, false, {{Smell::PinnedDependency, 1}}),
  };
  auto distributions = ratio_distributions(corpus);
  REQUIRE(distributions[Smell::PinnedDependency].size() == 2);
  CHECK(distributions[Smell::PinnedDependency][0].num == 2);
  CHECK(distributions[Smell::PinnedDependency][0].den == 4);
  CHECK(distributions[Smell::PinnedDependency][1].den == 2);
  // the binary lockfile smell has no distribution
  CHECK(distributions.count(Smell::NoLockfile) == 0);
  CHECK(distributions.count(Smell::UrlDependency) == 0);
}

TEST_CASE("empty corpora are rejected") {
  std::vector<ProjectSummary> none;
  CHECK_THROWS_AS(prevalence_table(none), EmptyCorpus);
  CHECK_THROWS_AS(cooccurrence_lock_pinned(none), EmptyCorpus);
  CHECK_THROWS_AS(distinct_smell_histogram(none), EmptyCorpus);
  CHECK_THROWS_AS(accumulation_series({}), EmptyCorpus);
}

namespace {

TimelinePoint tp(Smell smell, std::int64_t year, unsigned month,
                 std::int64_t accumulation) {
  TimelinePoint p;
  p.smell = smell;
  p.month = {year, month};
  p.accumulation = accumulation;
  return p;
}

}  // namespace

TEST_CASE("accumulation series carries values forward and tracks entry") {
  ProjectTimeline early;
  early.project = "early";
  early.first_month = YearMonth{2021, 1};
  early.timeline = {tp(Smell::PinnedDependency, 2021, 1, 2)};

  ProjectTimeline late;
  late.project = "late";
  late.first_month = YearMonth{2021, 3};
  late.timeline = {tp(Smell::PinnedDependency, 2021, 3, 1),
                   tp(Smell::PinnedDependency, 2021, 4, 0)};

  ProjectTimeline quiet;
  quiet.project = "quiet";
  quiet.first_month = YearMonth{2021, 2};
  // no events at all: contributes zeros from february on

  auto series = accumulation_series({early, late, quiet});
  const auto& points = series[Smell::PinnedDependency];
  REQUIRE(points.size() == 4);

  CHECK(points[0].month == YearMonth{2021, 1});
  CHECK(points[0].active_projects == 1);
  CHECK(points[0].total == 2);
  CHECK(points[0].mean_text() == "2.0");

  CHECK(points[1].active_projects == 2);
  CHECK(points[1].total == 2);
  CHECK(points[1].mean_text() == "1.0");

  CHECK(points[2].active_projects == 3);
  CHECK(points[2].total == 3);
  CHECK(points[2].mean_text() == "1.0");

  CHECK(points[3].active_projects == 3);
  CHECK(points[3].total == 2);
  CHECK(points[3].mean_text() == "0.7");
}

TEST_CASE("projects without history are excluded from the series") {
  ProjectTimeline some;
  some.project = "some";
  some.first_month = YearMonth{2021, 1};
  some.timeline = {tp(Smell::UrlDependency, 2021, 1, 1)};

  ProjectTimeline none;
  none.project = "none";  // first_month unset

  auto series = accumulation_series({some, none});
  REQUIRE(series[Smell::UrlDependency].size() == 1);
  CHECK(series[Smell::UrlDependency][0].active_projects == 1);
}
