int *leak_returned_ignored_mk() {
    int *p = malloc(4);
    return p;
}
int leak_returned_ignored() {
    int *q = leak_returned_ignored_mk();
    return 0;
}
