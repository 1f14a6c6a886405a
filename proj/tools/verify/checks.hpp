#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sketchfem::verify {

/// Collects failed requirements of one check.
class Context {
 public:
  void require(bool ok, const std::string& what);
  void note(const std::string& text);

  bool passed() const { return failures_.empty(); }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

struct Check {
  std::string name;
  std::function<void(Context&)> body;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Oracle comparisons on built-in meshes with at most 400 unknowns.
const std::vector<Check>& oracle_checks();

/// Runs one check; exceptions count as failures.
CheckResult run_check(const Check& check);

/// Runs every check whose name contains `filter`, printing one line per
/// check. Returns the number of failures.
int run_checks(std::ostream& out, std::string_view filter = {});

}  // namespace sketchfem::verify
