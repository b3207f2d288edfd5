#include <string>
#include <vector>

#include "cacore/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cacore::cli::run(std::move(args));
}
