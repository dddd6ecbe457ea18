# Test package for the settop finite-model checks
