#include "rfid/cli.hpp"

int main(int argc, char** argv) { return rfid::run(argc, argv); }
