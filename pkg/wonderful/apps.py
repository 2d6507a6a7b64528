from django.apps import AppConfig


class WonderfulConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'wonderful'
    verbose_name = 'Wonderful compactification'
