# Resource managers module
