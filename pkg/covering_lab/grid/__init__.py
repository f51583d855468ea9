from covering_lab.grid.occupancy import OccupancyGrid, check_grid_size

__all__ = ["OccupancyGrid", "check_grid_size"]
