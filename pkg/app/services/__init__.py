# Servicios del motor: álgebra, fibrados, verificaciones y reportes
