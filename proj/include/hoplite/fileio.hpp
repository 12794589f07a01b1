#pragma once

// Reader/writer for the comma-separated project files:
//   *.project  *.config  *.patient  *.mix  *.session  *.alloc  *.target
//
// Header keywords match case-insensitively and their trailing comma is
// optional. Lines may end in LF or CRLF; emitted files always use LF.
// Profile lines carry durations in the order (ICU, surgery, postop ward).

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hoplite/domain.hpp"
#include "hoplite/error.hpp"

namespace hoplite {

struct ParseOptions {
  bool lenient = false;  // tolerate unknown trailing fields
};

// Component file names as listed in a .project file; empty = not supplied.
struct ProjectFiles {
  std::string config;
  std::string patient;
  std::string mix;
  std::string session;
  std::string targets;
  std::string allocation;

  bool operator==(const ProjectFiles&) const = default;
};

struct ProjectBundle {
  std::string projectName;
  HospitalConfig config;
  PatientCatalog catalog;
  std::optional<Mix> mix;
  std::optional<SessionAssignment> sessions;
  std::optional<TargetSet> targets;
  std::optional<Allocation> allocation;
  ProjectFiles files;

  bool operator==(const ProjectBundle&) const = default;
};

namespace fileio_detail {

struct Line {
  int number = 0;
  std::vector<std::string> fields;
  std::vector<int> columns;  // 1-based start column of each field
};

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::vector<Line> splitLines(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    ++number;
    if (!trim(raw).empty()) {
      Line line;
      line.number = number;
      std::size_t start = 0;
      while (true) {
        std::size_t comma = raw.find(',', start);
        std::string_view piece =
            raw.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        line.fields.push_back(trim(piece));
        line.columns.push_back(static_cast<int>(start) + 1);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      lines.push_back(std::move(line));
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

class Context {
 public:
  Context(std::string fileName, ParseOptions options)
      : fileName_(std::move(fileName)), options_(options) {}

  [[noreturn]] void fail(const Line& line, std::size_t field, const std::string& what) const {
    int col = field < line.columns.size() ? line.columns[field] : 0;
    throw ParseError({fileName_, line.number, col}, what);
  }
  [[noreturn]] void failAt(int lineNumber, const std::string& what) const {
    throw ParseError({fileName_, std::max(lineNumber, 1), 0}, what);
  }

  // Header lines: the keyword plus at most one (empty) trailing field.
  bool isHeader(const Line& line, std::string_view keyword) const {
    if (lower(line.fields[0]) != lower(keyword)) return false;
    for (std::size_t i = 1; i < line.fields.size(); ++i)
      if (!line.fields[i].empty() && !options_.lenient)
        fail(line, i, "unexpected field after header '" + std::string(keyword) + "'");
    return true;
  }

  void expectFields(const Line& line, std::size_t count) const {
    if (line.fields.size() < count)
      fail(line, line.fields.size() - 1,
           "expected " + std::to_string(count) + " fields, found " + std::to_string(line.fields.size()));
    if (line.fields.size() > count && !options_.lenient) {
      // A single empty trailing field (dangling comma) is tolerated.
      bool onlyEmpty = true;
      for (std::size_t i = count; i < line.fields.size(); ++i) onlyEmpty &= line.fields[i].empty();
      if (!onlyEmpty || line.fields.size() > count + 1) fail(line, count, "unknown trailing field");
    }
  }

  double number(const Line& line, std::size_t field) const {
    const std::string& s = line.fields[field];
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value))
      fail(line, field, "expected a number, found '" + s + "'");
    return value;
  }

  int integer(const Line& line, std::size_t field) const {
    const std::string& s = line.fields[field];
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
      fail(line, field, "expected an integer, found '" + s + "'");
    return value;
  }

  // "[g]", "[g][p]" or "[g][p][k]" with exactly `depth` 1-based indices.
  std::vector<int> index(const Line& line, std::size_t field, std::size_t depth) const {
    const std::string& s = line.fields[field];
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
      if (s[pos] != '[') fail(line, field, "malformed index '" + s + "'");
      std::size_t close = s.find(']', pos);
      if (close == std::string::npos) fail(line, field, "malformed index '" + s + "'");
      int v = 0;
      auto [ptr, ec] = std::from_chars(s.data() + pos + 1, s.data() + close, v);
      if (close == pos + 1 || ec != std::errc() || ptr != s.data() + close || v < 1)
        fail(line, field, "malformed index '" + s + "'");
      out.push_back(v);
      pos = close + 1;
    }
    if (out.size() != depth)
      fail(line, field,
           "malformed index '" + s + "': expected " + std::to_string(depth) + " bracketed indices");
    return out;
  }

  const std::string& fileName() const { return fileName_; }
  const ParseOptions& options() const { return options_; }

 private:
  std::string fileName_;
  ParseOptions options_;
};

// Collects values keyed by 1-based indices, rejecting duplicates, then
// checks the keys are contiguous from 1.
template <typename T>
class IndexedBlock {
 public:
  void add(const Context& ctx, const Line& line, const std::vector<int>& key, T value) {
    if (!entries_.emplace(key, std::move(value)).second) ctx.fail(line, 0, "duplicate index " + describe(key));
    lines_[key] = line.number;
  }

  bool empty() const { return entries_.empty(); }
  const std::map<std::vector<int>, T>& entries() const { return entries_; }
  int lineOf(const std::vector<int>& key) const { return lines_.at(key); }

  static std::string describe(const std::vector<int>& key) {
    std::string s;
    for (int k : key) s += "[" + std::to_string(k) + "]";
    return s;
  }

 private:
  std::map<std::vector<int>, T> entries_;
  std::map<std::vector<int>, int> lines_;
};

template <typename T>
std::vector<T> flattenTypes(const Context& ctx, const IndexedBlock<T>& block) {
  std::vector<T> out;
  int expect = 1;
  for (const auto& [key, value] : block.entries()) {
    if (key[0] != expect) ctx.failAt(block.lineOf(key), "type indices must run 1.." + std::to_string(block.entries().size()) + " without gaps");
    out.push_back(value);
    ++expect;
  }
  return out;
}

template <typename T>
std::vector<std::vector<T>> flattenSubTypes(const Context& ctx, const IndexedBlock<T>& block) {
  std::vector<std::vector<T>> out;
  for (const auto& [key, value] : block.entries()) {
    const int g = key[0], p = key[1];
    if (g > static_cast<int>(out.size()) + 1 || (g == static_cast<int>(out.size()) + 1 && p != 1) ||
        (g == static_cast<int>(out.size()) && p != static_cast<int>(out.back().size()) + 1))
      ctx.failAt(block.lineOf(key), "sub-type index " + IndexedBlock<T>::describe(key) + " leaves a gap");
    if (g == static_cast<int>(out.size()) + 1) out.emplace_back();
    out.back().push_back(value);
  }
  return out;
}

inline void checkAgainstCatalog(const Context& ctx, int lineNumber, const PatientCatalog* catalog, int g,
                                int p = 0) {
  if (!catalog) return;
  if (p == 0 ? (g < 1 || g > static_cast<int>(catalog->typeCount())) : !catalog->contains(g, p))
    ctx.failAt(lineNumber, "index [" + std::to_string(g) + "]" + (p ? "[" + std::to_string(p) + "]" : "") +
                               " does not match any patient " + (p ? "sub-type" : "type"));
}

}  // namespace fileio_detail

// --- number formatting -----------------------------------------------------

// Shortest text that parses back to exactly the same double.
inline std::string formatNumber(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

// Revenue amounts always carry a decimal point ("1000.0").
inline std::string formatMoney(double value) {
  std::string s = formatNumber(value);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

// --- parsing ---------------------------------------------------------------

inline HospitalConfig parseConfig(std::string_view text, const std::string& fileName = "",
                                  ParseOptions options = {}) {
  using namespace fileio_detail;
  Context ctx(fileName, options);
  const auto lines = splitLines(text);
  std::optional<int> icu, theatres, wardCount;
  bool inWards = false;
  int wardInfoLine = 0;
  IndexedBlock<Ward> wards;
  std::set<std::string> names;

  for (const auto& line : lines) {
    const std::string key = lower(line.fields[0]);
    if (key == "intensive care beds" || key == "theatres" || key == "wards") {
      ctx.expectFields(line, 2);
      const int v = ctx.integer(line, 1);
      if (v < 0) ctx.fail(line, 1, "count must be >= 0");
      (key == "theatres" ? theatres : key == "wards" ? wardCount : icu) = v;
      inWards = false;
    } else if (ctx.isHeader(line, "Ward Info")) {
      inWards = true;
      wardInfoLine = line.number;
    } else if (inWards) {
      ctx.expectFields(line, 3);
      const auto idx = ctx.index(line, 0, 1);
      Ward w{idx[0], line.fields[1], ctx.integer(line, 2)};
      if (w.name.empty()) ctx.fail(line, 1, "ward name is empty");
      if (w.beds < 0) ctx.fail(line, 2, "bed count must be >= 0");
      if (!names.insert(w.name).second) ctx.fail(line, 1, "duplicate ward name '" + w.name + "'");
      wards.add(ctx, line, idx, w);
    } else {
      ctx.fail(line, 0, "missing header keyword before '" + line.fields[0] + "'");
    }
  }
  const int lastLine = lines.empty() ? 1 : lines.back().number;
  if (!icu) ctx.failAt(lastLine, "missing header keyword 'Intensive Care Beds'");
  if (!theatres) ctx.failAt(lastLine, "missing header keyword 'Theatres'");
  if (!wardCount) ctx.failAt(lastLine, "missing header keyword 'Wards'");
  if (!wardInfoLine && *wardCount > 0) ctx.failAt(lastLine, "missing header keyword 'Ward Info'");

  HospitalConfig config;
  config.icuBeds = *icu;
  config.theatres = *theatres;
  config.wards = flattenTypes(ctx, wards);
  if (static_cast<int>(config.wards.size()) != *wardCount)
    ctx.failAt(wardInfoLine ? wardInfoLine : lastLine,
               "'Wards' says " + std::to_string(*wardCount) + " but " +
                   std::to_string(config.wards.size()) + " wards are listed");
  return config;
}

inline PatientCatalog parsePatients(std::string_view text, const std::string& fileName = "",
                                    ParseOptions options = {}, const HospitalConfig* config = nullptr) {
  using namespace fileio_detail;
  Context ctx(fileName, options);
  const auto lines = splitLines(text);
  enum class Section { None, Types, SubTypes, Profiles, Revenue } section = Section::None;
  std::optional<int> typeCount;
  struct TypeRow { std::string name; int subCount; int line; };
  struct ProfileRow { Profile profile; std::vector<std::string> wards; };
  IndexedBlock<TypeRow> types;
  IndexedBlock<std::string> subNames;
  IndexedBlock<ProfileRow> profiles;
  IndexedBlock<double> revenues;
  bool sawTypes = false, sawSubs = false, sawProfiles = false;

  for (const auto& line : lines) {
    if (lower(line.fields[0]) == "patient types") {
      ctx.expectFields(line, 2);
      typeCount = ctx.integer(line, 1);
      if (*typeCount < 0) ctx.fail(line, 1, "count must be >= 0");
      section = Section::None;
    } else if (ctx.isHeader(line, "Patient Type")) {
      section = Section::Types;
      sawTypes = true;
    } else if (ctx.isHeader(line, "Patient Sub Type") || ctx.isHeader(line, "Patient Sub-Type")) {
      section = Section::SubTypes;
      sawSubs = true;
    } else if (ctx.isHeader(line, "Profile")) {
      section = Section::Profiles;
      sawProfiles = true;
    } else if (ctx.isHeader(line, "Revenue")) {
      section = Section::Revenue;
    } else {
      switch (section) {
        case Section::None:
          ctx.fail(line, 0, "missing header keyword before '" + line.fields[0] + "'");
        case Section::Types: {
          ctx.expectFields(line, 3);
          const auto idx = ctx.index(line, 0, 1);
          const int n = ctx.integer(line, 2);
          if (n < 0) ctx.fail(line, 2, "sub-type count must be >= 0");
          types.add(ctx, line, idx, TypeRow{line.fields[1], n, line.number});
          break;
        }
        case Section::SubTypes: {
          ctx.expectFields(line, 2);
          subNames.add(ctx, line, ctx.index(line, 0, 2), line.fields[1]);
          break;
        }
        case Section::Profiles: {
          if (line.fields.size() < 4) ctx.fail(line, line.fields.size() - 1, "profile needs [g][p],ICU,surgery,ward");
          const auto idx = ctx.index(line, 0, 2);
          ProfileRow row;
          row.profile.tIcu = ctx.number(line, 1);
          row.profile.tSurgery = ctx.number(line, 2);
          row.profile.tPostop = ctx.number(line, 3);
          if (row.profile.tIcu < 0) ctx.fail(line, 1, "negative duration");
          if (row.profile.tSurgery < 0) ctx.fail(line, 2, "negative duration");
          if (row.profile.tPostop < 0) ctx.fail(line, 3, "negative duration");
          for (std::size_t i = 4; i < line.fields.size(); ++i) {
            const std::string& w = line.fields[i];
            if (w.empty()) {
              if (i + 1 == line.fields.size()) break;  // dangling comma
              ctx.fail(line, i, "empty ward option");
            }
            if (config && !config->wardIndex(w)) ctx.fail(line, i, "dangling ward reference '" + w + "'");
            if (std::find(row.wards.begin(), row.wards.end(), w) != row.wards.end())
              ctx.fail(line, i, "ward '" + w + "' listed twice");
            row.wards.push_back(w);
          }
          if (row.profile.tPostop > 0 && row.wards.empty())
            ctx.fail(line, 3, "postop time requires at least one ward option");
          profiles.add(ctx, line, idx, std::move(row));
          break;
        }
        case Section::Revenue: {
          ctx.expectFields(line, 2);
          revenues.add(ctx, line, ctx.index(line, 0, 2), ctx.number(line, 1));
          break;
        }
      }
    }
  }
  const int lastLine = lines.empty() ? 1 : lines.back().number;
  if (!typeCount) ctx.failAt(lastLine, "missing header keyword 'Patient Types'");
  if (!sawTypes) ctx.failAt(lastLine, "missing header keyword 'Patient Type'");
  if (!sawSubs) ctx.failAt(lastLine, "missing header keyword 'Patient Sub Type'");
  if (!sawProfiles) ctx.failAt(lastLine, "missing header keyword 'Profile'");

  const auto typeRows = flattenTypes(ctx, types);
  if (static_cast<int>(typeRows.size()) != *typeCount)
    ctx.failAt(lastLine, "'Patient Types' says " + std::to_string(*typeCount) + " but " +
                             std::to_string(typeRows.size()) + " types are listed");
  const auto names = flattenSubTypes(ctx, subNames);

  PatientCatalog catalog;
  for (std::size_t gi = 0; gi < typeRows.size(); ++gi) {
    const auto& row = typeRows[gi];
    const int g = static_cast<int>(gi) + 1;
    const std::size_t have = gi < names.size() ? names[gi].size() : 0;
    if (have != static_cast<std::size_t>(row.subCount))
      ctx.failAt(row.line, "type [" + std::to_string(g) + "] declares " + std::to_string(row.subCount) +
                               " sub-types but " + std::to_string(have) + " are listed");
    PatientType t{g, row.name, {}};
    for (std::size_t pi = 0; pi < have; ++pi) {
      const int p = static_cast<int>(pi) + 1;
      auto pit = profiles.entries().find({g, p});
      if (pit == profiles.entries().end())
        ctx.failAt(subNames.lineOf({g, p}), "sub-type [" + std::to_string(g) + "][" + std::to_string(p) +
                                                "] has no profile");
      SubType s{p, names[gi][pi], pit->second.profile, pit->second.wards, std::nullopt};
      auto rit = revenues.entries().find({g, p});
      if (rit != revenues.entries().end()) s.revenue = rit->second;
      t.subTypes.push_back(std::move(s));
    }
    catalog.types.push_back(std::move(t));
  }
  if (names.size() > typeRows.size())
    ctx.failAt(lastLine, "sub-types listed for undeclared type [" + std::to_string(names.size()) + "]");
  for (const auto& [key, row] : profiles.entries())
    if (!catalog.contains(key[0], key[1]))
      ctx.failAt(profiles.lineOf(key), "profile for unknown sub-type " + IndexedBlock<int>::describe(key));
  for (const auto& [key, v] : revenues.entries())
    if (!catalog.contains(key[0], key[1]))
      ctx.failAt(revenues.lineOf(key), "revenue for unknown sub-type " + IndexedBlock<int>::describe(key));
  return catalog;
}

inline Mix parseMix(std::string_view text, const std::string& fileName = "", ParseOptions options = {},
                    const PatientCatalog* catalog = nullptr) {
  using namespace fileio_detail;
  Context ctx(fileName, options);
  enum class Section { None, Case, Sub } section = Section::None;
  IndexedBlock<double> caseBlock, subBlock;
  // Entries are "[g],pct" or "[g],name,pct".
  auto value = [&](const Line& line) {
    if (line.fields.size() == 2 || (line.fields.size() == 3 && line.fields[2].empty() && !options.lenient))
      return ctx.number(line, 1);
    ctx.expectFields(line, 3);
    return ctx.number(line, 2);
  };
  for (const auto& line : splitLines(text)) {
    if (ctx.isHeader(line, "Case Mix")) {
      section = Section::Case;
    } else if (ctx.isHeader(line, "Sub Mix")) {
      section = Section::Sub;
    } else if (section == Section::None) {
      ctx.fail(line, 0, "missing header keyword before '" + line.fields[0] + "'");
    } else {
      const auto idx = ctx.index(line, 0, section == Section::Case ? 1 : 2);
      const double v = value(line);
      if (v < 0 || v > 100) ctx.fail(line, line.fields.size() - 1, "percentage must lie in [0,100]");
      checkAgainstCatalog(ctx, line.number, catalog, idx[0], section == Section::Sub ? idx[1] : 0);
      (section == Section::Case ? caseBlock : subBlock).add(ctx, line, idx, v);
    }
  }
  Mix mix;
  mix.caseMix = flattenTypes(ctx, caseBlock);
  mix.subMix = flattenSubTypes(ctx, subBlock);
  return mix;
}

inline SessionAssignment parseSessions(std::string_view text, const std::string& fileName = "",
                                       ParseOptions options = {}, const PatientCatalog* catalog = nullptr) {
  using namespace fileio_detail;
  Context ctx(fileName, options);
  bool inBlock = false;
  IndexedBlock<double> block;
  for (const auto& line : splitLines(text)) {
    if (ctx.isHeader(line, "Patient Type")) {
      inBlock = true;
    } else if (!inBlock) {
      ctx.fail(line, 0, "missing header keyword 'Patient Type'");
    } else {
      ctx.expectFields(line, 3);
      const auto idx = ctx.index(line, 0, 1);
      const double m = ctx.number(line, 2);
      if (m < 0) ctx.fail(line, 2, "session count must be >= 0");
      checkAgainstCatalog(ctx, line.number, catalog, idx[0]);
      block.add(ctx, line, idx, m);
    }
  }
  return SessionAssignment{flattenTypes(ctx, block)};
}

inline TargetSet parseTargets(std::string_view text, const std::string& fileName = "",
                              ParseOptions options = {}, const PatientCatalog* catalog = nullptr) {
  using namespace fileio_detail;
  Context ctx(fileName, options);
  enum class Section { None, Type, Sub } section = Section::None;
  IndexedBlock<double> typeBlock, subBlock;
  for (const auto& line : splitLines(text)) {
    if (ctx.isHeader(line, "Patient Type")) {
      section = Section::Type;
    } else if (ctx.isHeader(line, "Patient Sub-Type") || ctx.isHeader(line, "Patient Sub Type")) {
      section = Section::Sub;
    } else if (section == Section::None) {
      ctx.fail(line, 0, "missing header keyword before '" + line.fields[0] + "'");
    } else {
      ctx.expectFields(line, 3);
      const auto idx = ctx.index(line, 0, section == Section::Type ? 1 : 2);
      const double v = ctx.number(line, 2);
      if (v < 0) ctx.fail(line, 2, "target must be >= 0");
      checkAgainstCatalog(ctx, line.number, catalog, idx[0], section == Section::Sub ? idx[1] : 0);
      (section == Section::Type ? typeBlock : subBlock).add(ctx, line, idx, v);
    }
  }
  TargetSet targets;
  targets.typeTargets = flattenTypes(ctx, typeBlock);
  targets.subTargets = flattenSubTypes(ctx, subBlock);
  return targets;
}

// The descr field ("Specialty 2-1@Ward 5") is ignored when a catalog is
// available; the ward is taken from the sub-type's option list instead.
inline Allocation parseAllocation(std::string_view text, const std::string& fileName = "",
                                  ParseOptions options = {}, const PatientCatalog* catalog = nullptr) {
  using namespace fileio_detail;
  Context ctx(fileName, options);
  bool inBlock = false;
  IndexedBlock<int> seen;
  Allocation alloc;
  for (const auto& line : splitLines(text)) {
    if (ctx.isHeader(line, "Allocation")) {
      inBlock = true;
    } else if (!inBlock) {
      ctx.fail(line, 0, "missing header keyword 'Allocation'");
    } else {
      ctx.expectFields(line, 3);
      const auto idx = ctx.index(line, 0, 3);
      seen.add(ctx, line, idx, 0);
      AllocationEntry e{idx[0], idx[1], idx[2], {}, ctx.number(line, 2)};
      if (e.count < 0) ctx.fail(line, 2, "allocation count must be >= 0");
      if (catalog) {
        checkAgainstCatalog(ctx, line.number, catalog, e.g, e.p);
        const auto& opts = catalog->subType(e.g, e.p).wardOptions;
        if (e.k > static_cast<int>(opts.size()))
          ctx.fail(line, 0, "dangling ward option " + std::to_string(e.k) + " for sub-type [" +
                                std::to_string(e.g) + "][" + std::to_string(e.p) + "]");
        e.ward = opts[e.k - 1];
      } else {
        const auto at = line.fields[1].rfind('@');
        if (at != std::string::npos) e.ward = trim(std::string_view(line.fields[1]).substr(at + 1));
      }
      alloc.entries.push_back(std::move(e));
    }
  }
  return alloc;
}

// --- formatting ------------------------------------------------------------

inline std::string formatConfig(const HospitalConfig& config) {
  std::ostringstream out;
  out << "Intensive Care Beds," << config.icuBeds << '\n'
      << "Theatres," << config.theatres << '\n'
      << "Wards," << config.wards.size() << '\n'
      << "Ward Info,\n";
  for (std::size_t i = 0; i < config.wards.size(); ++i)
    out << '[' << i + 1 << "]," << config.wards[i].name << ',' << config.wards[i].beds << '\n';
  return out.str();
}

inline std::string formatPatients(const PatientCatalog& catalog) {
  std::ostringstream out;
  out << "Patient Types," << catalog.typeCount() << '\n' << "Patient Type,\n";
  for (const auto& t : catalog.types) out << '[' << t.g << "]," << t.name << ',' << t.subTypes.size() << '\n';
  out << "Patient Sub Type,\n";
  for (const auto& t : catalog.types)
    for (const auto& s : t.subTypes) out << '[' << t.g << "][" << s.p << "]," << s.name << '\n';
  out << "Profile,\n";
  for (const auto& t : catalog.types)
    for (const auto& s : t.subTypes) {
      out << '[' << t.g << "][" << s.p << "]," << formatNumber(s.profile.tIcu) << ','
          << formatNumber(s.profile.tSurgery) << ',' << formatNumber(s.profile.tPostop);
      for (const auto& w : s.wardOptions) out << ',' << w;
      out << '\n';
    }
  bool anyRevenue = false;
  for (const auto& t : catalog.types)
    for (const auto& s : t.subTypes) anyRevenue |= s.revenue.has_value();
  if (anyRevenue) {
    out << "Revenue,\n";
    for (const auto& t : catalog.types)
      for (const auto& s : t.subTypes)
        if (s.revenue) out << '[' << t.g << "][" << s.p << "]," << formatMoney(*s.revenue) << '\n';
  }
  return out.str();
}

inline std::string formatMix(const Mix& mix) {
  std::ostringstream out;
  if (mix.hasCaseMix()) {
    out << "Case Mix,\n";
    for (std::size_t g = 0; g < mix.caseMix.size(); ++g)
      out << '[' << g + 1 << "]," << formatNumber(mix.caseMix[g]) << '\n';
  }
  if (mix.hasSubMix()) {
    out << "Sub Mix,\n";
    for (std::size_t g = 0; g < mix.subMix.size(); ++g)
      for (std::size_t p = 0; p < mix.subMix[g].size(); ++p)
        out << '[' << g + 1 << "][" << p + 1 << "]," << formatNumber(mix.subMix[g][p]) << '\n';
  }
  return out.str();
}

namespace fileio_detail {
inline std::string typeName(const PatientCatalog& catalog, std::size_t gi) {
  return gi < catalog.types.size() ? catalog.types[gi].name : "Type " + std::to_string(gi + 1);
}
inline std::string subTypeName(const PatientCatalog& catalog, std::size_t gi, std::size_t pi) {
  if (gi < catalog.types.size() && pi < catalog.types[gi].subTypes.size())
    return catalog.types[gi].subTypes[pi].name;
  return "Type " + std::to_string(gi + 1) + "-" + std::to_string(pi + 1);
}
}  // namespace fileio_detail

inline std::string formatSessions(const SessionAssignment& sessions, const PatientCatalog& catalog) {
  std::ostringstream out;
  out << "Patient Type,\n";
  for (std::size_t g = 0; g < sessions.sessions.size(); ++g)
    out << '[' << g + 1 << "]," << fileio_detail::typeName(catalog, g) << ','
        << formatNumber(sessions.sessions[g]) << '\n';
  return out.str();
}

inline std::string formatTargets(const TargetSet& targets, const PatientCatalog& catalog) {
  std::ostringstream out;
  if (targets.hasTypeTargets()) {
    out << "Patient Type,\n";
    for (std::size_t g = 0; g < targets.typeTargets.size(); ++g)
      out << '[' << g + 1 << "]," << fileio_detail::typeName(catalog, g) << ','
          << formatNumber(targets.typeTargets[g]) << '\n';
  }
  if (targets.hasSubTargets()) {
    out << "Patient Sub-Type,\n";
    for (std::size_t g = 0; g < targets.subTargets.size(); ++g)
      for (std::size_t p = 0; p < targets.subTargets[g].size(); ++p)
        out << '[' << g + 1 << "][" << p + 1 << "]," << fileio_detail::subTypeName(catalog, g, p) << ','
            << formatNumber(targets.subTargets[g][p]) << '\n';
  }
  return out.str();
}

inline std::string formatAllocation(const Allocation& alloc, const PatientCatalog& catalog) {
  std::ostringstream out;
  out << "Allocation,\n";
  for (const auto& e : alloc.entries)
    out << '[' << e.g << "][" << e.p << "][" << e.k << "],"
        << fileio_detail::subTypeName(catalog, e.g - 1, e.p - 1) << '@' << e.ward << ','
        << formatNumber(e.count) << '\n';
  return out.str();
}

inline std::string formatProject(const std::string& projectName, const ProjectFiles& files) {
  std::ostringstream out;
  out << "Project Name," << projectName << '\n'
      << "Hospital Configuration," << files.config << '\n'
      << "Patient Information," << files.patient << '\n'
      << "Case Mix," << files.mix << '\n'
      << "Session," << files.session << '\n'
      << "Targets," << files.targets << '\n'
      << "Allocation," << files.allocation << '\n';
  return out.str();
}

// --- files -----------------------------------------------------------------

inline std::string readTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError({path.string(), 1, 0}, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void writeTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out) throw Error("error writing '" + path.string() + "'");
}

inline void checkBundle(const ProjectBundle& bundle) {
  bundle.config.validate();
  bundle.catalog.validate(bundle.config);
  if (bundle.mix) validateMix(*bundle.mix, bundle.catalog, false, false);
  if (bundle.targets) bundle.targets->validate(bundle.catalog);
  if (bundle.allocation) bundle.allocation->validate(bundle.catalog);
  if (bundle.sessions && bundle.sessions->sessions.size() != bundle.catalog.typeCount())
    throw ValidationError("sessions", "expected " + std::to_string(bundle.catalog.typeCount()) + " entries");
}

inline ProjectBundle parseProject(std::string_view projectText, const std::filesystem::path& baseDir,
                                  const std::string& fileName = "", ParseOptions options = {}) {
  using namespace fileio_detail;
  Context ctx(fileName, options);
  ProjectBundle bundle;
  std::map<std::string, std::string*> slots{
      {"hospital configuration", &bundle.files.config}, {"patient information", &bundle.files.patient},
      {"case mix", &bundle.files.mix},                  {"session", &bundle.files.session},
      {"targets", &bundle.files.targets},               {"allocation", &bundle.files.allocation}};
  std::map<std::string, int> lineOf;
  bool haveName = false;
  for (const auto& line : splitLines(projectText)) {
    const std::string key = lower(line.fields[0]);
    ctx.expectFields(line, 2);
    if (key == "project name") {
      bundle.projectName = line.fields[1];
      haveName = true;
    } else if (auto it = slots.find(key); it != slots.end()) {
      *it->second = line.fields[1];
    } else {
      ctx.fail(line, 0, "unknown project entry '" + line.fields[0] + "'");
    }
    lineOf[key] = line.number;
  }
  if (!haveName) ctx.failAt(1, "missing header keyword 'Project Name'");
  if (bundle.files.config.empty()) ctx.failAt(1, "missing header keyword 'Hospital Configuration'");
  if (bundle.files.patient.empty()) ctx.failAt(1, "missing header keyword 'Patient Information'");

  auto load = [&](const std::string& name) { return readTextFile(baseDir / name); };
  bundle.config = parseConfig(load(bundle.files.config), bundle.files.config, options);
  bundle.catalog = parsePatients(load(bundle.files.patient), bundle.files.patient, options, &bundle.config);
  if (!bundle.files.mix.empty()) bundle.mix = parseMix(load(bundle.files.mix), bundle.files.mix, options, &bundle.catalog);
  if (!bundle.files.session.empty())
    bundle.sessions = parseSessions(load(bundle.files.session), bundle.files.session, options, &bundle.catalog);
  if (!bundle.files.targets.empty())
    bundle.targets = parseTargets(load(bundle.files.targets), bundle.files.targets, options, &bundle.catalog);
  if (!bundle.files.allocation.empty())
    bundle.allocation =
        parseAllocation(load(bundle.files.allocation), bundle.files.allocation, options, &bundle.catalog);
  try {
    checkBundle(bundle);
  } catch (const ValidationError& e) {
    throw ParseError({fileName, 1, 0}, e.what());
  }
  return bundle;
}

inline ProjectBundle loadProject(const std::filesystem::path& path, ParseOptions options = {}) {
  const std::string text = readTextFile(path);
  return parseProject(text, path.parent_path(), path.string(), options);
}

// Writes every present component next to the project file, naming missing
// component files after the project, then the .project file itself.
inline std::filesystem::path saveProject(ProjectBundle bundle, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string base = bundle.projectName.empty() ? "project" : bundle.projectName;
  auto nameFor = [&](std::string& slot, bool present, const char* ext) {
    if (!present)
      slot.clear();
    else if (slot.empty())
      slot = base + ext;
  };
  nameFor(bundle.files.config, true, ".config");
  nameFor(bundle.files.patient, true, ".patient");
  nameFor(bundle.files.mix, bundle.mix.has_value(), ".mix");
  nameFor(bundle.files.session, bundle.sessions.has_value(), ".session");
  nameFor(bundle.files.targets, bundle.targets.has_value(), ".target");
  nameFor(bundle.files.allocation, bundle.allocation.has_value(), ".alloc");

  writeTextFile(dir / bundle.files.config, formatConfig(bundle.config));
  writeTextFile(dir / bundle.files.patient, formatPatients(bundle.catalog));
  if (bundle.mix) writeTextFile(dir / bundle.files.mix, formatMix(*bundle.mix));
  if (bundle.sessions) writeTextFile(dir / bundle.files.session, formatSessions(*bundle.sessions, bundle.catalog));
  if (bundle.targets) writeTextFile(dir / bundle.files.targets, formatTargets(*bundle.targets, bundle.catalog));
  if (bundle.allocation)
    writeTextFile(dir / bundle.files.allocation, formatAllocation(*bundle.allocation, bundle.catalog));
  const auto projectPath = dir / (base + ".project");
  writeTextFile(projectPath, formatProject(bundle.projectName, bundle.files));
  return projectPath;
}

}  // namespace hoplite
