# Utilidades compartidas
