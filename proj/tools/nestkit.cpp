#include <nestkit/cli.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    auto res = nestkit::cli::run(std::move(args));
    (res.exit_code == nestkit::cli::kInputError ? std::cerr : std::cout) << res.report;
    return res.exit_code;
}
