#include "pinncert/cli.hpp"

int main(int argc, char** argv) {
    return pinncert::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
