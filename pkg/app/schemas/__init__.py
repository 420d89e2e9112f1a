# Esquemas de reportes y fixtures
