#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dmbl/error.hpp"
#include "dmbl/model.hpp"
#include "dmbl/rational.hpp"
#include "dmbl/stage_set.hpp"

namespace dmbl {

inline constexpr const char* kDumpHeader = "dmbl-model v1";

/// Line-oriented text dump. Construction is replayed on load and every listed
/// world, conditioning block and mass is checked against the replay.
///
///   dmbl-model v1
///   atoms p q | worlds a b c
///   schedule query|faithful
///   max-worlds K
///   lambda0 {..} {..} ...        explicit initial task list, if any
///   step n {base} case1 | case0 nu
///   stage n size
///   w index label                one per world
///   f n {block}                  worlds of mu_n(b_n) at stage n+1
///   dist world p/q               stage 0 masses
///   m stage world p/q            later masses
///   end
inline std::string dump_model(const ModelState& m) {
  std::ostringstream out;
  out << kDumpHeader << "\n";
  out << (m.is_generalized() ? "worlds" : "atoms");
  if (m.is_generalized()) {
    for (const auto& l : m.tables().stage(0).labels()) out << " " << l;
  } else {
    for (const auto& a : m.atoms().names()) out << " " << a;
  }
  out << "\n";
  out << "schedule " << to_string(m.schedule()) << "\n";
  out << "max-worlds " << m.max_worlds() << "\n";
  if (m.explicit_lambda0()) {
    out << "lambda0";
    for (const auto& s : *m.explicit_lambda0()) out << " " << s.to_string();
    out << "\n";
  }
  for (const auto& rec : m.history()) {
    out << "step " << rec.step << " " << rec.base.to_string();
    if (rec.tag.reprocess)
      out << " case0 " << rec.tag.nu << "\n";
    else
      out << " case1\n";
  }
  for (std::size_t n = 0; n <= m.stage(); ++n) {
    out << "stage " << n << " " << m.tables().size(n) << "\n";
    for (WorldIndex w = 0; w < m.tables().size(n); ++w) out << "w " << w << " " << m.tables().label(n, w) << "\n";
  }
  for (const auto& rec : m.history()) out << "f " << rec.step << " " << rec.pi_block.to_string() << "\n";
  if (m.has_rational_measure()) {
    for (WorldIndex w = 0; w < m.tables().size(0); ++w) out << "dist " << w << " " << to_string(m.masses(0)[w]) << "\n";
    for (std::size_t n = 1; n <= m.stage(); ++n)
      for (WorldIndex w = 0; w < m.tables().size(n); ++w)
        out << "m " << n << " " << w << " " << to_string(m.masses(n)[w]) << "\n";
  }
  out << "end\n";
  return out.str();
}

namespace detail {

inline StageSet parse_set(const std::string& text, std::size_t stage, std::size_t universe, std::size_t line) {
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') throw FormatError(line, "malformed set '" + text + "'");
  StageSet s(stage, universe);
  std::string body = text.substr(1, text.size() - 2);
  std::istringstream in(body);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw FormatError(line, "malformed set '" + text + "'");
    const unsigned long v = std::stoul(item);
    if (v >= universe) throw FormatError(line, "world " + item + " out of range in " + text);
    s.insert(static_cast<WorldIndex>(v));
  }
  return s;
}

inline std::size_t parse_count(const std::string& text, std::size_t line) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw FormatError(line, "expected a number, got '" + text + "'");
  return std::stoul(text);
}

}  // namespace detail

inline ModelState load_model(std::istream& in) {
  struct Line {
    std::size_t no;
    std::vector<std::string> words;
  };
  std::vector<Line> lines;
  std::string raw;
  std::size_t no = 0;
  bool ended = false;
  while (std::getline(in, raw)) {
    ++no;
    if (ended) {
      if (raw.find_first_not_of(" \t\r") != std::string::npos) throw FormatError(no, "content after 'end'");
      continue;
    }
    std::istringstream ls(raw);
    Line l{no, {}};
    std::string w;
    while (ls >> w) l.words.push_back(w);
    if (l.words.empty()) continue;
    if (l.words[0] == "end") {
      ended = true;
      continue;
    }
    lines.push_back(std::move(l));
  }
  if (lines.empty() || lines[0].words.size() != 2 || lines[0].words[0] + " " + lines[0].words[1] != kDumpHeader) {
    if (!lines.empty() && lines[0].words.size() == 2 && lines[0].words[0] == "dmbl-model")
      throw FormatError(lines[0].no, "unsupported dump version '" + lines[0].words[1] + "'");
    throw FormatError(lines.empty() ? 1 : lines[0].no, "missing 'dmbl-model v1' header");
  }
  if (!ended) throw FormatError(no + 1, "truncated dump: missing 'end'");

  std::size_t i = 1;
  auto need = [&](const char* key) -> const Line& {
    if (i >= lines.size() || lines[i].words[0] != key)
      throw FormatError(i < lines.size() ? lines[i].no : no, std::string("expected '") + key + "' line");
    return lines[i++];
  };

  const Line& names = lines.at(i);
  if (names.words[0] != "atoms" && names.words[0] != "worlds") throw FormatError(names.no, "expected 'atoms' or 'worlds'");
  const bool generalized = names.words[0] == "worlds";
  std::vector<std::string> labels(names.words.begin() + 1, names.words.end());
  ++i;
  const Line& sched = need("schedule");
  if (sched.words.size() != 2) throw FormatError(sched.no, "expected 'schedule <mode>'");
  ModelOptions opt;
  try {
    opt.schedule = parse_schedule(sched.words[1]);
  } catch (const Error& e) {
    throw FormatError(sched.no, e.what());
  }
  const Line& maxw = need("max-worlds");
  if (maxw.words.size() != 2) throw FormatError(maxw.no, "expected 'max-worlds <K>'");
  opt.max_worlds = detail::parse_count(maxw.words[1], maxw.no);

  std::optional<std::vector<StageSet>> lambda0;
  if (i < lines.size() && lines[i].words[0] == "lambda0") {
    if (!generalized) throw FormatError(lines[i].no, "lambda0 is only used in generalized mode");
    std::vector<StageSet> slots;
    for (std::size_t k = 1; k < lines[i].words.size(); ++k)
      slots.push_back(detail::parse_set(lines[i].words[k], 0, labels.size(), lines[i].no));
    lambda0 = std::move(slots);
    ++i;
  }

  ModelState m = [&] {
    try {
      return generalized ? ModelState::generalized(labels, lambda0, opt) : ModelState::standard(AtomContext(labels), opt);
    } catch (const FormatError&) {
      throw;
    } catch (const Error& e) {
      throw FormatError(names.no, e.what());
    }
  }();

  while (i < lines.size() && lines[i].words[0] == "step") {
    const Line& l = lines[i++];
    if (l.words.size() < 4) throw FormatError(l.no, "malformed step line");
    const std::size_t n = detail::parse_count(l.words[1], l.no);
    if (n != m.stage()) throw FormatError(l.no, "steps out of order");
    const StageSet base = detail::parse_set(l.words[2], n, m.world_count(), l.no);
    try {
      const ProcessingRecord& rec = opt.schedule == Schedule::Faithful ? m.faithful_step() : m.process_base(base);
      if (rec.base != base) throw FormatError(l.no, "replayed base differs from the recorded one");
      const bool case0 = l.words[3] == "case0";
      if (case0 != rec.tag.reprocess || (case0 && (l.words.size() != 5 || detail::parse_count(l.words[4], l.no) != rec.tag.nu)))
        throw FormatError(l.no, "replayed case differs from the recorded one");
    } catch (const FormatError&) {
      throw;
    } catch (const Error& e) {
      throw FormatError(l.no, e.what());
    }
  }

  for (std::size_t n = 0; n <= m.stage(); ++n) {
    const Line& l = need("stage");
    if (l.words.size() != 3 || detail::parse_count(l.words[1], l.no) != n)
      throw FormatError(l.no, "expected 'stage " + std::to_string(n) + " <size>'");
    const std::size_t size = detail::parse_count(l.words[2], l.no);
    if (size != m.tables().size(n)) throw FormatError(l.no, "stage size differs from the replay");
    for (WorldIndex w = 0; w < size; ++w) {
      if (i >= lines.size() || lines[i].words[0] != "w")
        throw FormatError(i < lines.size() ? lines[i].no : no, "expected " + std::to_string(size) + " world lines");
      const Line& wl = lines[i++];
      if (wl.words.size() != 3 || detail::parse_count(wl.words[1], wl.no) != w || wl.words[2] != m.tables().label(n, w))
        throw FormatError(wl.no, "world listing differs from the replay");
    }
  }
  for (const auto& rec : m.history()) {
    const Line& l = need("f");
    if (l.words.size() != 3 || detail::parse_count(l.words[1], l.no) != rec.step ||
        detail::parse_set(l.words[2], rec.step + 1, m.tables().size(rec.step + 1), l.no) != rec.pi_block)
      throw FormatError(l.no, "conditioning block differs from the replay");
  }
  if (i < lines.size() && lines[i].words[0] == "dist") {
    std::vector<Rational> weights(m.tables().size(0));
    for (WorldIndex w = 0; w < weights.size(); ++w) {
      const Line& l = need("dist");
      if (l.words.size() != 3 || detail::parse_count(l.words[1], l.no) != w) throw FormatError(l.no, "malformed dist line");
      try {
        weights[w] = parse_rational(l.words[2]);
      } catch (const Error& e) {
        throw FormatError(l.no, e.what());
      }
    }
    m.attach_masses(weights);
    for (std::size_t n = 1; n <= m.stage(); ++n)
      for (WorldIndex w = 0; w < m.tables().size(n); ++w) {
        const Line& l = need("m");
        if (l.words.size() != 4 || detail::parse_count(l.words[1], l.no) != n ||
            detail::parse_count(l.words[2], l.no) != w)
          throw FormatError(l.no, "malformed measure line");
        Rational v;
        try {
          v = parse_rational(l.words[3]);
        } catch (const Error& e) {
          throw FormatError(l.no, e.what());
        }
        if (v != m.masses(n)[w]) throw FormatError(l.no, "mass differs from the replay");
      }
  }
  if (i < lines.size()) throw FormatError(lines[i].no, "unexpected line '" + lines[i].words[0] + "'");
  return m;
}

inline ModelState load_model_text(const std::string& text) {
  std::istringstream in(text);
  return load_model(in);
}

}  // namespace dmbl
