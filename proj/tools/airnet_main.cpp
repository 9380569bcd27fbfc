#include <iostream>
#include <string>
#include <vector>

#include "airnet/cli.hpp"

int main(int argc, char** argv) {
    try {
        return airnet::run_cli(std::vector<std::string>(argv + 1, argv + argc));
    } catch (const std::exception& fatal) {
        std::cerr << "airnet: " << fatal.what() << "\n";
        return 1;
    }
}
