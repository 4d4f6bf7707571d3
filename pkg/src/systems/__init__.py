# Coalition game systems module
