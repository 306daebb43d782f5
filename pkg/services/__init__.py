"Service layer: validation, sweep, slices, stabilization, reports and plots."
