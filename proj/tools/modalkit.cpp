#include <iostream>
#include <string>
#include <vector>

#include "modalkit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    modalkit::CommandResult r = modalkit::execute(args, std::cin);
    std::cout << r.report;
    return r.status;
}
