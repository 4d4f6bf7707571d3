# Output and report module
