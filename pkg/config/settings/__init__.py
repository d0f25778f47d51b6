# Settings module initialization
