# Domain models: states, parameters, operators, records and run configuration
