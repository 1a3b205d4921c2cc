#include <catch_amalgamated.hpp>

#include <map>

#include "domainscope/report.hpp"

using namespace domainscope;

namespace {

OrganizationRecord make_org(const std::string& id,
                            std::vector<std::pair<std::string, Category>> domains) {
  OrganizationRecord org;
  org.id = id;
  org.name = id;
  for (auto& [host, cat] : domains) org.domains.push_back({host, cat, "", "manual"});
  return org;
}

ImpactSnapshot snap(const std::string& host,
                    std::optional<std::int64_t> pages,
                    std::optional<std::int64_t> alexa = std::nullopt,
                    std::optional<std::int64_t> ose = std::nullopt,
                    std::optional<double> authority = std::nullopt) {
  ImpactSnapshot s;
  s.host = host;
  s.page_count = pages;
  s.sites_linking_in = alexa;
  s.root_domains_linking = ose;
  s.authority = authority;
  s.captured_at = "2024-06-01T00:00:00Z";
  s.backend_id = "fixture";
  return s;
}

}  // namespace

TEST_CASE("contribution percentages match the published rows") {
  auto santander = make_org("Santander", {{"santander.com", Category::Corporate},
                                          {"universia.net", Category::BrandProduct}});
  auto ree = make_org("REE", {{"ree.es", Category::Corporate}});
  std::map<std::string, ImpactSnapshot> snaps;
  snaps["santander.com"] = snap("santander.com", 60000);
  snaps["universia.net"] = snap("universia.net", 17225739 - 60000);
  snaps["ree.es"] = snap("ree.es", 6790);

  auto rows = contribution_table({santander, ree}, snaps);
  REQUIRE(rows.size() == 2);
  // ascending by percentage
  CHECK(rows[0].org_id == "Santander");
  REQUIRE(rows[0].percentage);
  CHECK(*rows[0].percentage == Catch::Approx(0.348).margin(0.001));
  CHECK(rows[1].org_id == "REE");
  REQUIRE(rows[1].percentage);
  CHECK(*rows[1].percentage == Catch::Approx(100.000).margin(1e-9));
}

TEST_CASE("zero-over-zero contribution is missing, not zero") {
  auto org = make_org("X", {{"x.com", Category::Corporate}});
  std::map<std::string, ImpactSnapshot> snaps;
  snaps["x.com"] = snap("x.com", 0);
  auto rows = contribution_table({org}, snaps);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].percentage);
}

TEST_CASE("missing page counts are footnoted, absent corporate is an error") {
  auto org = make_org("X", {{"x.com", Category::Corporate},
                            {"y.com", Category::Related}});
  std::map<std::string, ImpactSnapshot> snaps;
  snaps["x.com"] = snap("x.com", 100);
  snaps["y.com"] = snap("y.com", std::nullopt);  // missing page count
  auto rows = contribution_table({org}, snaps);
  CHECK(rows[0].missing_page_counts == 1);
  CHECK(rows[0].total_page_count == 100);

  std::map<std::string, ImpactSnapshot> no_corp;
  no_corp["y.com"] = snap("y.com", 5);
  CHECK_THROWS_AS(contribution_table({org}, no_corp),
                  MissingCorporateSnapshot);
}

TEST_CASE("best performers tally categories per indicator") {
  auto org1 = make_org("A", {{"a.com", Category::Corporate},
                             {"abrand.com", Category::BrandProduct}});
  auto org2 = make_org("B", {{"b.com", Category::Corporate}});
  std::map<std::string, ImpactSnapshot> snaps;
  snaps["a.com"] = snap("a.com", 100, 50, std::nullopt, 10.0);
  snaps["abrand.com"] = snap("abrand.com", 900, 20, std::nullopt, 30.0);
  snaps["b.com"] = snap("b.com", 5, 5, 5, 5.0);

  auto tally = best_performers({org1, org2}, snaps);
  size_t corp = static_cast<size_t>(Category::Corporate);
  size_t brand = static_cast<size_t>(Category::BrandProduct);
  // page count: A won by the brand domain, B by corporate
  CHECK(tally.counts[brand][0] == 1);
  CHECK(tally.counts[corp][0] == 1);
  // alexa: A corporate wins
  CHECK(tally.counts[corp][1] == 2);
  // OSE: only B has data
  CHECK(tally.denominators[2] == 1);
  CHECK(tally.counts[corp][2] == 1);
  // authority: A brand and B corporate
  CHECK(tally.counts[brand][3] == 1);
  CHECK(tally.counts[corp][3] == 1);
  // column sums equal denominators
  for (size_t ix = 0; ix < 4; ++ix) {
    int sum = 0;
    for (size_t c = 0; c < 8; ++c) sum += tally.counts[c][ix];
    CHECK(sum == tally.denominators[ix]);
  }
}

TEST_CASE("single-domain organization: corporate wins every indicator") {
  auto org = make_org("Solo", {{"solo.com", Category::Corporate}});
  std::map<std::string, ImpactSnapshot> snaps;
  snaps["solo.com"] = snap("solo.com", 10, 10, 10, 10.0);
  auto tally = best_performers({org}, snaps);
  size_t corp = static_cast<size_t>(Category::Corporate);
  for (size_t ix = 0; ix < 4; ++ix) CHECK(tally.counts[corp][ix] == 1);
}

TEST_CASE("ties go to the corporate domain") {
  auto org = make_org("T", {{"zcorp.com", Category::Corporate},
                            {"abrand.com", Category::BrandProduct}});
  std::map<std::string, ImpactSnapshot> snaps;
  snaps["zcorp.com"] = snap("zcorp.com", 100);
  snaps["abrand.com"] = snap("abrand.com", 100);
  auto tally = best_performers({org}, snaps);
  CHECK(tally.counts[static_cast<size_t>(Category::Corporate)][0] == 1);
  CHECK(tally.counts[static_cast<size_t>(Category::BrandProduct)][0] == 0);
}

TEST_CASE("correlation rendering: 2 decimals, ** on significant cells") {
  CorrelationResult c;
  c.columns = {"Alexa", "OSE"};
  c.rho = {{1.0, 0.94}, {0.94, 1.0}};
  c.significant = {{false, true}, {true, false}};
  c.n_used = {{30, 30}, {30, 30}};
  std::string csv = render_correlation_csv(c);
  CHECK(csv ==
        "indicator,Alexa,OSE\n"
        "Alexa,1.00,\n"
        "OSE,**0.94,1.00\n");
}

TEST_CASE("contribution rendering: 3 decimals, missing as dash") {
  std::vector<ContributionRow> rows(2);
  rows[0].org_id = "Santander";
  rows[0].corporate_page_count = 60000;
  rows[0].total_page_count = 17225739;
  rows[0].percentage = 100.0 * 60000 / 17225739;
  rows[1].org_id = "Empty";
  std::string csv = render_contribution_csv(rows);
  CHECK(csv.find("Santander,60000,17225739,0.348,0") != std::string::npos);
  CHECK(csv.find("Empty,0,0,\xE2\x80\x94,0") != std::string::npos);
}

TEST_CASE("rendered numbers re-parse to the stored values") {
  std::vector<ContributionRow> rows(1);
  rows[0].org_id = "X";
  rows[0].corporate_page_count = 12345;
  rows[0].total_page_count = 99999;
  rows[0].percentage = 100.0 * 12345 / 99999;
  std::string csv = render_contribution_csv(rows);
  auto line = csv.substr(csv.find("X,"));
  double parsed = std::stod(split(line, ',')[3]);
  CHECK(std::abs(parsed - *rows[0].percentage) <= 0.0005 + 1e-12);
}

TEST_CASE("same inputs render byte-identical reports") {
  ReportInputs in;
  in.orgs = {make_org("A", {{"a.com", Category::Corporate}})};
  in.summary = summarize_registry(in.orgs);
  in.snapshots["a.com"] = snap("a.com", 10);
  in.contribution = contribution_table(in.orgs, in.snapshots);
  in.performers = best_performers(in.orgs, in.snapshots);
  in.suffix_snapshot_version = "test";
  in.backend_ids = {"fixture"};

  auto dir1 = std::filesystem::temp_directory_path() / "domainscope_rep1";
  auto dir2 = std::filesystem::temp_directory_path() / "domainscope_rep2";
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
  render_report(in, dir1);
  render_report(in, dir2);
  for (auto& entry : std::filesystem::recursive_directory_iterator(dir1)) {
    if (!entry.is_regular_file()) continue;
    auto rel = std::filesystem::relative(entry.path(), dir1);
    std::ifstream f1(entry.path(), std::ios::binary);
    std::ifstream f2(dir2 / rel, std::ios::binary);
    std::string c1((std::istreambuf_iterator<char>(f1)),
                   std::istreambuf_iterator<char>());
    std::string c2((std::istreambuf_iterator<char>(f2)),
                   std::istreambuf_iterator<char>());
    INFO(rel.string());
    CHECK(c1 == c2);
  }
}

TEST_CASE("empty org set renders headers-only files") {
  ReportInputs in;
  in.suffix_snapshot_version = "test";
  in.backend_ids = {"fixture"};
  auto dir = std::filesystem::temp_directory_path() / "domainscope_rep_empty";
  std::filesystem::remove_all(dir);
  render_report(in, dir);
  std::ifstream f(dir / "tables" / "contribution.csv", std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(f)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "org,corporate,total,percentage,missing_page_counts\n");
}
