#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ermm::cli {

struct ReportRow {
  std::string quantity;
  std::string tag;  // must be registered
  std::string value;
  std::string target;
  std::string stderr_;
  std::optional<bool> pass;
};

class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void meta(const std::string& key, const std::string& value) { metadata_.emplace_back(key, value); }
  // Throws InvariantError for an unregistered tag.
  void add(ReportRow row);

  const std::string& command() const { return command_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const { return metadata_; }
  const std::vector<ReportRow>& rows() const { return rows_; }
  // First row with pass == false, if any.
  const ReportRow* first_failure() const;

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> metadata_;
  std::vector<ReportRow> rows_;
};

const std::set<std::string>& tag_registry();

// Metadata as "# key: value" lines, then the fixed header
// quantity,paper_ref,value,target,stderr,pass.
std::string to_csv(const Report& report);
std::string to_json(const Report& report);

// Entry point of the ermm tool. Returns the process exit code:
// 0 success, 1 verification failure, 2 usage error, 3 resource guard.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ermm::cli
