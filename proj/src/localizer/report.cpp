#include "nullcause/localizer/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace nullcause::localizer {

namespace {

using Json = nlohmann::ordered_json;

Json spot_json(const Spot& s) {
  return Json{{"entity", s.entity}, {"class", s.class_id}, {"line", s.line}};
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string spot_text(const Spot& s) {
  return s.entity + " @ " + s.class_id + ":" + std::to_string(s.line);
}

}  // namespace

std::string render_json(const Report& report, bool with_timings) {
  Json j;
  j["project"] = report.project;
  j["rule_version"] = report.rule_version;
  j["notice"] = report.notice;
  j["tests"] = Json::array();
  for (const FailingTest& t : report.tests)
    j["tests"].push_back(
        Json{{"id", t.id}, {"name", t.name}, {"failure", t.failure}});
  j["candidates"] = Json::array();
  for (const RankedCause& c : report.candidates) {
    Json cj;
    cj["rank"] = c.rank;
    cj["cause"] = c.cause.entity;
    cj["location"] = Json{{"class", c.cause.class_id}, {"line", c.cause.line}};
    cj["code"] = c.code;
    cj["scheme"] = c.scheme;
    cj["npe_type"] = c.npe_type;
    cj["status"] = c.status;
    cj["supporters"] = Json::array();
    for (const Supporter& s : c.supporters)
      cj["supporters"].push_back(
          Json{{"test", s.test}, {"expr", spot_json(s.expr)}});
    cj["evidence"] = Json::array();
    for (const Hop& h : c.evidence)
      cj["evidence"].push_back(
          Json{{"to", spot_json(h.to)}, {"from", spot_json(h.from)}});
    j["candidates"].push_back(std::move(cj));
  }
  if (with_timings) {
    j["timings"] = Json::array();
    for (const StageTiming& t : report.timings)
      j["timings"].push_back(Json{{"stage", t.stage}, {"ms", t.millis}});
  }
  return j.dump(2) + "\n";
}

std::string render_text(const Report& report, bool with_timings) {
  std::ostringstream out;
  out << "project: " << report.project << "  (rules " << report.rule_version
      << ")\n";
  for (const FailingTest& t : report.tests) {
    out << "failing: " << t.name << "\n";
    std::istringstream f(t.failure);
    std::string line;
    while (std::getline(f, line)) out << "  " << line << "\n";
  }
  if (!report.notice.empty()) out << report.notice << "\n";
  if (!report.candidates.empty()) out << "\n";
  for (const RankedCause& c : report.candidates) {
    out << "#" << c.rank << "  " << c.cause.class_id << ":" << c.cause.line
        << "  " << one_line(c.code) << "\n";
    out << "    " << c.cause.entity << "  " << c.scheme << " " << c.npe_type
        << "  [" << c.status << "]\n";
    for (const Hop& h : c.evidence)
      out << "      " << spot_text(h.to) << "  <-  " << spot_text(h.from)
          << "\n";
  }
  if (with_timings && !report.timings.empty()) {
    out << "\n";
    for (const StageTiming& t : report.timings) {
      std::ostringstream ms;
      ms << t.millis;
      out << t.stage << ": " << ms.str() << " ms\n";
    }
  }
  return out.str();
}

}  // namespace nullcause::localizer
