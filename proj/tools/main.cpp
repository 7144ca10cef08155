#include "commands.hpp"

int main(int argc, char** argv) { return sibson::cli::run(argc, argv); }
