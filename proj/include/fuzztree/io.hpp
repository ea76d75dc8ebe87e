#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzztree/analysis.hpp"
#include "fuzztree/fault_tree.hpp"

namespace fuzztree {

/// Lexical or syntactic failure in a fault-tree file, with 1-based position.
class ParseError : public Error {
 public:
  ParseError(int line, int col, const std::string& what)
      : Error("parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + what),
        line(line),
        col(col) {}
  int line, col;
};

/// A parsed fault-tree file: the validated model, crisp probabilities, and
/// the fuzzy annotation (if any) per basic-event slot.
struct ParsedModel {
  FaultTree tree;
  ProbVector probs;
  std::vector<std::optional<ShapeSpec>> annotations;  // per BE slot

  bool has_fuzzy() const;
  /// Annotations discretized at n_cuts; unannotated events become crisp
  /// zero-width fuzzy numbers.
  FuzzyProbVector fuzzy(int n_cuts) const;
};

/// Galileo-style format:
///   toplevel "Name";
///   "Gate" and|or "Child1" "Child2" ...;
///   "Event" prob=0.1 [tri=a,b,d | trap=a,b,c,d | interval=a,b | gauss=m,s];
/// Names may be quoted or bare identifiers; `//` starts a line comment.
ParsedModel parse_ft(std::string_view text);
ParsedModel load_ft(const std::filesystem::path& path);

/// Inverse of parse_ft; numbers carry 17 significant digits so the round trip
/// is lossless. Nodes without names get canonical ones ("n<id>").
std::string serialize_ft(const FaultTree& t, std::span<const double> probs,
                         std::span<const std::optional<ShapeSpec>> annotations = {});

void save_ft(const std::filesystem::path& path, const FaultTree& t, std::span<const double> probs,
             std::span<const std::optional<ShapeSpec>> annotations = {});

/// Result file: JSON object with keys engine, n_cuts, alpha[], lower[],
/// upper[], crisp_value (only when the apex cut is degenerate), wall_time_ms.
std::string result_to_json(const AnalysisResult& r);

/// Reads back the fields needed by downstream commands (alpha/lower/upper,
/// engine, n_cuts).
AnalysisResult result_from_json(std::string_view text);

enum class CurveInterp { Step, Linear };

/// (x, membership) pairs as CSV for plotting the membership curve of an
/// alpha-cut family. Step mode reproduces membership_at exactly at every
/// emitted point; linear mode joins successive cut endpoints.
std::string curve_csv(const AlphaFuzzy& cuts, CurveInterp interp);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace fuzztree
