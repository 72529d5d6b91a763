#include <doctest.h>

#include <sstream>

#include "ermm/cli.hpp"
#include "ermm/errors.hpp"

using namespace ermm;
using namespace ermm::cli;

namespace {

int run_args(std::vector<std::string> args, std::string& out) {
  args.insert(args.begin(), "ermm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = run(static_cast<int>(argv.size()), argv.data(), o, e);
  out = o.str();
  return code;
}

}  // namespace

TEST_CASE("report rows need registered tags") {
  Report r("test");
  CHECK_NOTHROW(r.add({"x", "catalan", "1", "", "", std::nullopt}));
  CHECK_THROWS_AS(r.add({"x", "no-such-tag", "1", "", "", std::nullopt}), InvariantError);
  r.add({"y", "identity:convolution", "", "", "", false});
  REQUIRE(r.first_failure() != nullptr);
  CHECK(r.first_failure()->quantity == "y");
}

TEST_CASE("csv quoting and header") {
  Report r("test");
  r.meta("k", "v");
  r.add({"a,b", "catalan", "say \"hi\"", "", "", true});
  const std::string csv = to_csv(r);
  CHECK(csv == "# command: test\n# k: v\nquantity,paper_ref,value,target,stderr,pass\n"
               "\"a,b\",catalan,\"say \"\"hi\"\"\",,,pass\n");
}

TEST_CASE("run returns documented exit codes") {
  std::string out;
  CHECK(run_args({"tables", "--seq", "d", "--q", "3", "--kmax", "3"}, out) == 0);
  CHECK(out.find("d_3,tree-diagram-count,189,") != std::string::npos);
  CHECK(run_args({"tables", "--seq", "x"}, out) == 2);
  CHECK(run_args({"oracle-dump", "--n", "7"}, out) == 3);
  CHECK(run_args({}, out) == 2);
}
