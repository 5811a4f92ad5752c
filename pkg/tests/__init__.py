# Tests package for the identification tools
