int uaf_call_argument() {
    int *p = malloc(4);
    free(p);
    report_value(*p);
    return 0;
}
