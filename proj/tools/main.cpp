#include "qhahn/cli.hpp"

int main(int argc, char** argv) { return qhahn::run_cli(argc, argv); }
