from lwbp.ui.printer import CsvPrinter, JsonPrinter, Printer, TextPrinter, make_printer

__all__ = ["CsvPrinter", "JsonPrinter", "Printer", "TextPrinter", "make_printer"]
