// Prints the oracle table; its output is frozen in data/oracle_table.json.
#include "bcsgp/oracles/oracles.hpp"
#include <iostream>

int main() { std::cout << bcsgp::oracles::oracle_table_json().dump(2) << "\n"; }
