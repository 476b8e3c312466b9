# Test package for RelayDMT
