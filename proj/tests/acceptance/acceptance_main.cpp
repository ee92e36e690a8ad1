// Acceptance gate: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit 0 only if all pass.

#include <chrono>
#include <iostream>

#include "nonrad/verify.hpp"

int main(int argc, char** argv) {
  nonrad::VerifyOptions opt;
  std::string suite = "all";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--fast")
      opt.fast = true;
    else
      suite = arg;
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<nonrad::CriterionResult> results;
  try {
    results = nonrad::run_suite(suite, opt);
  } catch (const std::exception& e) {
    std::cerr << "acceptance suite aborted: " << e.what() << "\n";
    return 1;
  }
  nonrad::print_results(std::cout, results);
  const auto dt = std::chrono::duration_cast<std::chrono::seconds>(
      std::chrono::steady_clock::now() - t0);
  std::cout << "suite '" << suite << "' finished in " << dt.count() << " s\n";
  return nonrad::all_passed(results) ? 0 : 1;
}
