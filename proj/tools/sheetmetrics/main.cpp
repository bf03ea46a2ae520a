#include "sheetmetrics/commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return sheetmetrics::cli::run(argc, argv, std::cout, std::cerr);
}
