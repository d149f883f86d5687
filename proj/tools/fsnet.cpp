#include <fsnet/cli.hpp>

auto main(int argc, char** argv) -> int
{
  auto args = std::vector<std::string>(argv + 1, argv + argc);
  return fsnet::cli::run(args, std::cout, std::cerr);
}
