#include <catch_amalgamated.hpp>

#include <map>

#include "domainscope/crawler.hpp"
#include "domainscope/html.hpp"

using namespace domainscope;

namespace {

class MapFetcher : public Fetcher {
 public:
  explicit MapFetcher(std::map<std::string, std::string> pages)
      : pages_(std::move(pages)) {}
  FetchResponse get(const std::string& url) override {
    ++calls_;
    per_url_[url]++;
    auto it = pages_.find(url);
    if (it == pages_.end()) return {404, "", "text/plain"};
    return {200, it->second, "text/html"};
  }
  std::string id() const override { return "map"; }
  int calls() const { return calls_; }
  const std::map<std::string, int>& per_url() const { return per_url_; }

 private:
  std::map<std::string, std::string> pages_;
  std::map<std::string, int> per_url_;
  int calls_ = 0;
};

OrganizationRecord simple_org(std::vector<std::string> hosts) {
  OrganizationRecord org;
  org.id = "ORG";
  for (size_t i = 0; i < hosts.size(); ++i)
    org.domains.push_back({hosts[i],
                           i == 0 ? Category::Corporate : Category::Related,
                           "", "manual"});
  return org;
}

}  // namespace

TEST_CASE("outlink extraction partitions external hosts and frontier") {
  std::string html = R"html(
<html><body>
<a href="http://www.acciona-engineering.com/a">Engineering</a>
<a href="/about/team.html">Team</a>
<a href="contact.html">Contact</a>
<a href="mailto:info@acciona.com">Mail</a>
<a href="javascript:void(0)">Menu</a>
</body></html>)html";
  auto scan = extract_outlink_hosts(html, "http://acciona.com/index.html");
  REQUIRE(scan.externals.size() == 1);
  CHECK(scan.externals[0].host == "acciona-engineering.com");
  CHECK(scan.externals[0].anchor == "Engineering");
  REQUIRE(scan.frontier.size() == 2);
  CHECK(scan.frontier[0] == "http://acciona.com/about/team.html");
  CHECK(scan.frontier[1] == "http://acciona.com/contact.html");
}

TEST_CASE("same-site links only: empty external set, non-empty frontier") {
  std::string html = R"(<a href="/a">A</a><a href="/b">B</a>)";
  auto scan = extract_outlink_hosts(html, "http://x.com/");
  CHECK(scan.externals.empty());
  CHECK(scan.frontier.size() == 2);
}

TEST_CASE("variants of one host collapse to a single external") {
  std::string html = R"(
<a href="http://x.com">one</a>
<a href="http://X.COM/path">two</a>
<a href="http://sub.x.com">three</a>)";
  auto scan = extract_outlink_hosts(html, "http://base.org/");
  REQUIRE(scan.externals.size() == 1);
  CHECK(scan.externals[0].host == "x.com");
  CHECK(scan.externals[0].anchor == "one");  // first anchor wins
}

TEST_CASE("malformed markup does not abort") {
  std::string html =
      "<a href='http://y.net/a' <broken <><<a href=\"http://z.org\">z</a>"
      "<div unclosed><a href=http://q.io/bare>bare</a>";
  auto scan = extract_outlink_hosts(html, "http://base.org/");
  std::set<std::string> hosts;
  for (auto& e : scan.externals) hosts.insert(e.host);
  CHECK(hosts.count("z.org"));
  CHECK(hosts.count("q.io"));
}

TEST_CASE("area and link tags contribute, comments and scripts do not") {
  std::string html = R"(
<area href="http://maps.example.net/x">
<link rel="stylesheet" href="http://cdn.example.io/style.css">
<!-- <a href="http://commented.org">no</a> -->
<script>var s = '<a href="http://scripted.org">no</a>';</script>)";
  auto scan = extract_outlink_hosts(html, "http://base.org/");
  std::set<std::string> hosts;
  for (auto& e : scan.externals) hosts.insert(e.host);
  CHECK(hosts == std::set<std::string>{"example.net", "example.io"});
}

TEST_CASE("binary content raises DecodeError") {
  std::string binary = "\x7f"
                       "ELF";
  binary += std::string(1, '\0');
  binary += "junk";
  CHECK_THROWS_AS(extract_links(binary), DecodeError);
}

TEST_CASE("entity-encoded hrefs are decoded") {
  std::string html = R"(<a href="http://x.com/a?b=1&amp;c=2">x</a>)";
  auto links = extract_links(html);
  REQUIRE(links.size() == 1);
  CHECK(links[0].href == "http://x.com/a?b=1&c=2");
}

TEST_CASE("crawl harvests unregistered hosts with evidence") {
  MapFetcher fetcher({
      {"http://corp.com/",
       R"(<a href="/about.html">About</a>
          <a href="http://brand-x.com/">Brand X</a>)"},
      {"http://corp.com/about.html",
       R"(<a href="http://related.net/">Partner</a>
          <a href="http://corp.com/">Home</a>)"},
  });
  CrawlPolicy policy;
  policy.obey_robots = false;
  policy.include_sitemaps = false;
  auto result = crawl_organization(simple_org({"corp.com"}), policy, fetcher);
  REQUIRE(result.candidates.size() == 2);
  CHECK(result.candidates[0].host == "brand-x.com");
  CHECK(result.candidates[0].evidence.at(0).source_page == "http://corp.com/");
  CHECK(result.candidates[0].evidence.at(0).anchor == "Brand X");
  CHECK(result.candidates[1].host == "related.net");
  CHECK(result.candidates[1].evidence.at(0).source_page ==
        "http://corp.com/about.html");
}

TEST_CASE("already-registered hosts never become candidates") {
  MapFetcher fetcher({
      {"http://corp.com/", R"(<a href="http://other.com/">other</a>)"},
      {"http://other.com/", R"(<a href="http://corp.com/">corp</a>)"},
  });
  CrawlPolicy policy;
  policy.obey_robots = false;
  policy.include_sitemaps = false;
  auto result =
      crawl_organization(simple_org({"corp.com", "other.com"}), policy, fetcher);
  CHECK(result.candidates.empty());
}

TEST_CASE("depth zero parses only the seed pages") {
  MapFetcher fetcher({
      {"http://corp.com/",
       R"(<a href="/deeper.html">d</a><a href="http://ext1.org/">e</a>)"},
      {"http://corp.com/deeper.html",
       R"(<a href="http://ext2.org/">e2</a>)"},
  });
  CrawlPolicy policy;
  policy.max_depth = 0;
  policy.obey_robots = false;
  policy.include_sitemaps = false;
  auto result = crawl_organization(simple_org({"corp.com"}), policy, fetcher);
  REQUIRE(result.candidates.size() == 1);
  CHECK(result.candidates[0].host == "ext1.org");
  CHECK(result.diagnostics.pages_fetched.at("corp.com") == 1);
}

TEST_CASE("page budget per registrable domain is never exceeded") {
  std::map<std::string, std::string> pages;
  pages["http://corp.com/"] = "<a href='/p1.html'>1</a><a href='/p2.html'>2</a>"
                              "<a href='/p3.html'>3</a><a href='/p4.html'>4</a>";
  for (int i = 1; i <= 4; ++i)
    pages["http://corp.com/p" + std::to_string(i) + ".html"] =
        "<a href='/p" + std::to_string(i + 1) + ".html'>next</a>";
  MapFetcher fetcher(pages);
  CrawlPolicy policy;
  policy.max_pages_per_domain = 3;
  policy.max_depth = 5;
  policy.obey_robots = false;
  policy.include_sitemaps = false;
  auto result = crawl_organization(simple_org({"corp.com"}), policy, fetcher);
  CHECK(result.diagnostics.pages_fetched.at("corp.com") == 3);
  CHECK(fetcher.calls() == 3);  // robots disabled, so charged fetches only
}

TEST_CASE("robots disallow blocks matching paths") {
  MapFetcher fetcher({
      {"http://corp.com/robots.txt",
       "User-agent: *\nDisallow: /private\n"},
      {"http://corp.com/",
       R"(<a href="/private/x.html">x</a><a href="/public.html">p</a>)"},
      {"http://corp.com/public.html",
       R"(<a href="http://seen.org/">s</a>)"},
      {"http://corp.com/private/x.html",
       R"(<a href="http://hidden.org/">h</a>)"},
  });
  CrawlPolicy policy;
  policy.include_sitemaps = false;
  auto result = crawl_organization(simple_org({"corp.com"}), policy, fetcher);
  std::set<std::string> hosts;
  for (auto& c : result.candidates) hosts.insert(c.host);
  CHECK(hosts.count("seen.org"));
  CHECK_FALSE(hosts.count("hidden.org"));
  CHECK(result.diagnostics.robots_blocked == 1);
}

TEST_CASE("sitemap locs join the frontier; external locs become candidates") {
  MapFetcher fetcher({
      {"http://corp.com/", "<p>no links</p>"},
      {"http://corp.com/sitemap.xml",
       "<?xml version=\"1.0\"?><urlset>"
       "<url><loc>http://corp.com/hidden.html</loc></url>"
       "<url><loc>http://listed-elsewhere.org/x</loc></url>"
       "</urlset>"},
      {"http://corp.com/hidden.html",
       R"(<a href="http://from-sitemap.net/">f</a>)"},
  });
  CrawlPolicy policy;
  policy.obey_robots = false;
  auto result = crawl_organization(simple_org({"corp.com"}), policy, fetcher);
  std::set<std::string> hosts;
  for (auto& c : result.candidates) hosts.insert(c.host);
  CHECK(hosts.count("from-sitemap.net"));
  CHECK(hosts.count("listed-elsewhere.org"));
}

TEST_CASE("sitemap indexes recurse into child sitemaps") {
  MapFetcher fetcher({
      {"http://corp.com/", "<p>plain</p>"},
      {"http://corp.com/sitemap.xml",
       "<sitemapindex><sitemap><loc>http://corp.com/sub-sitemap.xml</loc>"
       "</sitemap></sitemapindex>"},
      {"http://corp.com/sub-sitemap.xml",
       "<urlset><url><loc>http://corp.com/deep.html</loc></url></urlset>"},
      {"http://corp.com/deep.html",
       R"(<a href="http://nested-find.org/">n</a>)"},
  });
  CrawlPolicy policy;
  policy.obey_robots = false;
  policy.max_depth = 2;
  auto result = crawl_organization(simple_org({"corp.com"}), policy, fetcher);
  REQUIRE(result.candidates.size() == 1);
  CHECK(result.candidates[0].host == "nested-find.org");
}

TEST_CASE("fetch failures are diagnostics, not fatal") {
  std::map<std::string, std::string> pages = {
      {"http://corp.com/", R"(<a href="/gone.html">g</a>)"},
  };
  MapFetcher fetcher(pages);
  CrawlPolicy policy;
  policy.obey_robots = false;
  policy.include_sitemaps = false;
  auto result = crawl_organization(simple_org({"corp.com"}), policy, fetcher);
  REQUIRE(result.diagnostics.fetch_failures.size() == 1);
  CHECK(result.diagnostics.fetch_failures[0].url == "http://corp.com/gone.html");
  CHECK(result.diagnostics.fetch_failures[0].status == 404);
}

TEST_CASE("identical fixtures yield identical candidate lists") {
  const std::map<std::string, std::string> pages = {
      {"http://corp.com/",
       R"(<a href="http://b.org/">b</a><a href="http://a.org/">a</a>)"},
  };
  CrawlPolicy policy;
  policy.obey_robots = false;
  policy.include_sitemaps = false;
  MapFetcher f1{pages}, f2{pages};
  auto r1 = crawl_organization(simple_org({"corp.com"}), policy, f1);
  auto r2 = crawl_organization(simple_org({"corp.com"}), policy, f2);
  REQUIRE(r1.candidates.size() == r2.candidates.size());
  for (size_t i = 0; i < r1.candidates.size(); ++i) {
    CHECK(r1.candidates[i].host == r2.candidates[i].host);
    CHECK(r1.candidates[i].first_seen == r2.candidates[i].first_seen);
  }
  // sorted by host
  CHECK(r1.candidates[0].host == "a.org");
  CHECK(r1.candidates[1].host == "b.org");
}

TEST_CASE("minimum inter-request delay paces same-domain fetches") {
  std::map<std::string, std::string> pages = {
      {"http://corp.com/", "<a href='/a.html'>a</a><a href='/b.html'>b</a>"},
      {"http://corp.com/a.html", ""},
      {"http://corp.com/b.html", ""},
  };
  MapFetcher fetcher(pages);
  CrawlPolicy policy;
  policy.obey_robots = false;
  policy.include_sitemaps = false;
  policy.min_request_delay = 10.0;
  double now = 0;
  Clock virtual_clock{[&] { return now; }, [&](double s) { now += s; }};
  auto result = crawl_organization(simple_org({"corp.com"}), policy, fetcher,
                                   "ua", virtual_clock);
  CHECK(result.diagnostics.pages_fetched.at("corp.com") == 3);
  CHECK(now >= 20.0);  // two enforced gaps
}
