# Etale cohomology toolkit for rings of integers
