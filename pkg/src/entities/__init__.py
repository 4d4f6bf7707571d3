# Network entities module
