// SPDX-License-Identifier: MIT
// Placeholder; full CLI lands with the scenario loader.
int main() { return 0; }
