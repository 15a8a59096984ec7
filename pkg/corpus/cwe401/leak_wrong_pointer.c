int leak_wrong_pointer() {
    int *p = malloc(4);
    int *q = malloc(4);
    free(q);
    return 0;
}
