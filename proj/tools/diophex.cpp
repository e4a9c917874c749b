#include <iostream>
#include <string>
#include <vector>

#include "diophex/cli.hpp"

int main(int argc, char** argv) {
    return diophex::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
