# Green Coalitions - Source Package
