from django.apps import AppConfig


class CellsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'cells'
    verbose_name = 'Affine Grassmannian cells'
